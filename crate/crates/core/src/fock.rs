//! Brute-force two-mode Fock-space simulator used as an independent oracle.
//!
//! States live in a truncated basis `{|m1, m2⟩ : m_i ≤ cutoff, m1 + m2 ≤ max_total}`
//! ordered by total photon number and then by `m1`, so each photon-number
//! sector is a contiguous index range. Pure states are kept as amplitude
//! vectors until a loss channel forces a density matrix.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{check_eta, LossyMziConfig};
use crate::error::{domain, Error, Result};
use crate::linalg::{c, CMatrix, RMatrix, I};

/// Truncation deficit accepted by [`qfi_fock`] and [`parity_expectation_fock`].
pub const TRUNCATION_TOL: f64 = 1e-10;
/// Floor on `λ_i + λ_j` in the symmetric-logarithmic-derivative sum.
pub const SLD_FLOOR: f64 = 1e-12;
/// Base step of the finite-difference phase derivative.
pub const DERIVATIVE_STEP: f64 = 1e-4;
pub const DEFAULT_CUTOFF: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    cutoff: usize,
    max_total: usize,
    states: Vec<(usize, usize)>,
    lookup: Vec<Option<usize>>,
    sector_start: Vec<usize>,
}

impl FockBasis {
    pub fn new(cutoff: usize, max_total: usize) -> Self {
        let max_total = max_total.min(2 * cutoff);
        let side = cutoff + 1;
        let mut states = Vec::new();
        let mut lookup = vec![None; side * side];
        let mut sector_start = Vec::with_capacity(max_total + 2);
        for total in 0..=max_total {
            sector_start.push(states.len());
            for m1 in total.saturating_sub(cutoff)..=total.min(cutoff) {
                lookup[m1 * side + (total - m1)] = Some(states.len());
                states.push((m1, total - m1));
            }
        }
        sector_start.push(states.len());
        Self { cutoff, max_total, states, lookup, sector_start }
    }

    /// Every `m1, m2 ≤ cutoff`.
    pub fn square(cutoff: usize) -> Self {
        Self::new(cutoff, 2 * cutoff)
    }

    /// Every `m1 + m2 ≤ max_total`; closed under passive two-mode unitaries.
    pub fn triangular(max_total: usize) -> Self {
        Self::new(max_total, max_total)
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn max_total(&self) -> usize {
        self.max_total
    }

    pub fn state(&self, idx: usize) -> (usize, usize) {
        self.states[idx]
    }

    pub fn index(&self, m1: usize, m2: usize) -> Option<usize> {
        if m1 > self.cutoff || m2 > self.cutoff {
            return None;
        }
        self.lookup[m1 * (self.cutoff + 1) + m2]
    }

    fn sector(&self, total: usize) -> std::ops::Range<usize> {
        self.sector_start[total]..self.sector_start[total + 1]
    }

    fn is_passive_closed(&self) -> bool {
        self.cutoff >= self.max_total
    }

    fn photons(&self, idx: usize, mode: usize) -> usize {
        let (m1, m2) = self.states[idx];
        if mode == 0 {
            m1
        } else {
            m2
        }
    }

    /// Index of the state with `k` more photons in `mode`.
    fn raised(&self, idx: usize, mode: usize, k: usize) -> Option<usize> {
        let (m1, m2) = self.states[idx];
        if m1 + m2 + k > self.max_total {
            return None;
        }
        if mode == 0 {
            self.index(m1 + k, m2)
        } else {
            self.index(m1, m2 + k)
        }
    }

    /// `a|m⟩ = √m |m−1⟩` on `mode`.
    fn lower(&self, idx: usize, mode: usize) -> Option<(usize, f64)> {
        let (m1, m2) = self.states[idx];
        match mode {
            0 if m1 > 0 => self.index(m1 - 1, m2).map(|j| (j, (m1 as f64).sqrt())),
            1 if m2 > 0 => self.index(m1, m2 - 1).map(|j| (j, (m2 as f64).sqrt())),
            _ => None,
        }
    }

    /// `a†|m⟩ = √(m+1) |m+1⟩` on `mode`, if the result stays in the basis.
    fn raise(&self, idx: usize, mode: usize) -> Option<(usize, f64)> {
        let m = self.photons(idx, mode);
        self.raised(idx, mode, 1).map(|j| (j, ((m + 1) as f64).sqrt()))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Pure(DVector<Complex64>),
    Mixed(CMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    basis: FockBasis,
    repr: Repr,
    deficit: f64,
}

fn check_mode(mode: usize) -> Result<()> {
    if mode > 1 {
        return Err(Error::Contract(format!("mode index {mode} is not 0 or 1")));
    }
    Ok(())
}

/// Smallest per-mode cutoff whose TMSV truncation deficit `tanh^{2(K+1)} r` is at most `tol`.
pub fn cutoff_for_deficit(r: f64, tol: f64) -> usize {
    let t = r.tanh();
    if t == 0.0 {
        return 1;
    }
    let k = (tol.ln() / (2.0 * t.ln())).ceil() - 1.0;
    k.max(1.0) as usize
}

/// `Σ_k tanh^k r / cosh r |k, k⟩` truncated at `k ≤ cutoff` and renormalized.
/// The discarded probability `tanh^{2(cutoff+1)} r` is kept as the state's deficit.
pub fn tmsv_fock(r: f64, cutoff: usize) -> Result<FockState> {
    if !(r.is_finite() && r >= 0.0) {
        return domain(format!("squeeze parameter r = {r} must be finite and >= 0"));
    }
    if cutoff == 0 {
        return domain("cutoff must be at least 1");
    }
    let basis = FockBasis::square(cutoff);
    let t = r.tanh();
    let mut amps = DVector::zeros(basis.dim());
    let mut amp = 1.0 / r.cosh();
    for k in 0..=cutoff {
        amps[basis.index(k, k).expect("diagonal state in square basis")] = c(amp);
        amp *= t;
    }
    let norm = amps.norm();
    amps.unscale_mut(norm);
    Ok(FockState { basis, repr: Repr::Pure(amps), deficit: t.powi(2 * (cutoff as i32 + 1)) })
}

impl FockState {
    pub fn number_state(m1: usize, m2: usize, cutoff: usize) -> Result<Self> {
        let basis = FockBasis::square(cutoff);
        let idx = basis
            .index(m1, m2)
            .ok_or_else(|| Error::Contract(format!("|{m1},{m2}⟩ exceeds cutoff {cutoff}")))?;
        let mut amps = DVector::zeros(basis.dim());
        amps[idx] = c(1.0);
        Ok(Self { basis, repr: Repr::Pure(amps), deficit: 0.0 })
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::number_state(0, 0, cutoff.max(1)).expect("vacuum fits any basis")
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    /// Probability discarded when the state was truncated.
    pub fn deficit(&self) -> f64 {
        self.deficit
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, Repr::Pure(_))
    }

    pub fn density(&self) -> CMatrix {
        match &self.repr {
            Repr::Pure(v) => v * v.adjoint(),
            Repr::Mixed(rho) => rho.clone(),
        }
    }

    pub fn trace(&self) -> f64 {
        match &self.repr {
            Repr::Pure(v) => v.norm_squared(),
            Repr::Mixed(rho) => rho.trace().re,
        }
    }

    /// Smallest eigenvalue of the density matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        match &self.repr {
            Repr::Pure(_) => 0.0,
            Repr::Mixed(rho) => SymmetricEigen::new(rho.clone()).eigenvalues.min(),
        }
    }

    /// `⟨m1, m2|ρ|m1, m2⟩`, zero outside the basis.
    pub fn probability(&self, m1: usize, m2: usize) -> f64 {
        match self.basis.index(m1, m2) {
            None => 0.0,
            Some(i) => match &self.repr {
                Repr::Pure(v) => v[i].norm_sqr(),
                Repr::Mixed(rho) => rho[(i, i)].re,
            },
        }
    }

    /// Re-expresses the state in `basis`, which must contain every populated level.
    pub fn embed(&self, basis: &FockBasis) -> Result<Self> {
        let map: Vec<Option<usize>> = (0..self.basis.dim())
            .map(|i| {
                let (m1, m2) = self.basis.state(i);
                basis.index(m1, m2)
            })
            .collect();
        if map.iter().any(Option::is_none) {
            return Err(Error::Contract("target basis does not contain the source basis".into()));
        }
        let map: Vec<usize> = map.into_iter().map(Option::unwrap).collect();
        let repr = match &self.repr {
            Repr::Pure(v) => {
                let mut out = DVector::zeros(basis.dim());
                for (i, &j) in map.iter().enumerate() {
                    out[j] = v[i];
                }
                Repr::Pure(out)
            }
            Repr::Mixed(rho) => {
                let mut out = CMatrix::zeros(basis.dim(), basis.dim());
                for (a, &ja) in map.iter().enumerate() {
                    for (b, &jb) in map.iter().enumerate() {
                        out[(ja, jb)] = rho[(a, b)];
                    }
                }
                Repr::Mixed(out)
            }
        };
        Ok(Self { basis: basis.clone(), repr, deficit: self.deficit })
    }

    fn into_mixed(self) -> (FockBasis, CMatrix, f64) {
        let rho = self.density();
        (self.basis, rho, self.deficit)
    }

    /// `Tr(ρ A)` for `A = op_1 op_2` with each factor a ladder operator `(mode, raise)`.
    fn moment(&self, first: (usize, bool), second: (usize, bool)) -> Complex64 {
        let apply = |idx: usize, (mode, up): (usize, bool)| {
            if up {
                self.basis.raise(idx, mode)
            } else {
                self.basis.lower(idx, mode)
            }
        };
        let element = |row: usize, col: usize| match &self.repr {
            Repr::Pure(v) => v[row] * v[col].conj(),
            Repr::Mixed(rho) => rho[(row, col)],
        };
        // Tr(ρ A) = Σ_m ⟨m|ρ A|m⟩ with A|m⟩ = c |n⟩.
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..self.basis.dim() {
            let Some((k, a)) = apply(m, second) else { continue };
            let Some((n, b)) = apply(k, first) else { continue };
            acc += element(m, n) * (a * b);
        }
        acc
    }

    fn mean(&self, op: (usize, bool)) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..self.basis.dim() {
            let up = if op.1 { self.basis.raise(m, op.0) } else { self.basis.lower(m, op.0) };
            if let Some((n, a)) = up {
                acc += match &self.repr {
                    Repr::Pure(v) => v[m] * v[n].conj(),
                    Repr::Mixed(rho) => rho[(m, n)],
                } * a;
            }
        }
        acc
    }

    /// Quadrature covariance matrix in the `(x1, p1, x2, p2)` ordering with vacuum = identity.
    pub fn covariance(&self) -> RMatrix {
        // Ladder operators b = (a1, a1†, a2, a2†) and quadratures R = U b.
        let ops = [(0, false), (0, true), (1, false), (1, true)];
        let mut u = CMatrix::zeros(4, 4);
        for mode in 0..2 {
            u[(2 * mode, 2 * mode)] = c(1.0);
            u[(2 * mode, 2 * mode + 1)] = c(1.0);
            u[(2 * mode + 1, 2 * mode)] = -I;
            u[(2 * mode + 1, 2 * mode + 1)] = I;
        }
        let mut g = CMatrix::zeros(4, 4);
        for (a, &oa) in ops.iter().enumerate() {
            for (b, &ob) in ops.iter().enumerate() {
                g[(a, b)] = self.moment(oa, ob) / self.trace();
            }
        }
        let means = DVector::from_iterator(4, ops.iter().map(|&o| self.mean(o) / self.trace()));
        let second = &u * g * u.transpose();
        let first = &u * means;
        let sym = (&second + second.transpose()).scale(0.5) - &first * first.transpose();
        sym.map(|z| z.re)
    }
}

/// `U_φ = exp(−iφ a1†a1)`.
pub fn apply_phase(state: &FockState, phi: f64) -> FockState {
    let basis = &state.basis;
    let phase = |i: usize| Complex64::from_polar(1.0, -phi * basis.photons(i, 0) as f64);
    let repr = match &state.repr {
        Repr::Pure(v) => Repr::Pure(DVector::from_fn(v.len(), |i, _| v[i] * phase(i))),
        Repr::Mixed(rho) => {
            Repr::Mixed(CMatrix::from_fn(rho.nrows(), rho.ncols(), |i, j| {
                rho[(i, j)] * phase(i) * phase(j).conj()
            }))
        }
    };
    FockState { basis: basis.clone(), repr, deficit: state.deficit }
}

/// Sector matrices of the balanced beam splitter `exp(iπ/4 (a1†a2 + a2†a1))`, which maps
/// `a1† → (a1† + i a2†)/√2` and `a2† → (i a1† + a2†)/√2`.
fn beam_splitter_sector(total: usize) -> CMatrix {
    let dim = total + 1;
    // Basis |m1, total − m1⟩ for m1 = 0..=total; hopping couples m1 and m1 + 1.
    let mut h = RMatrix::zeros(dim, dim);
    for m1 in 0..total {
        let m2 = total - m1;
        let amp = (((m1 + 1) * m2) as f64).sqrt();
        h[(m1 + 1, m1)] = amp;
        h[(m1, m1 + 1)] = amp;
    }
    let eig = SymmetricEigen::new(h);
    let v = eig.eigenvectors.map(c);
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * l));
    &v * CMatrix::from_diagonal(&phases) * v.transpose()
}

/// Balanced beam splitter on the two modes. Square bases are first embedded into the
/// triangular basis of the same maximal photon number so the map is exact.
pub fn apply_beamsplitter_50(state: &FockState) -> Result<FockState> {
    let state = if state.basis.is_passive_closed() {
        state.clone()
    } else {
        state.embed(&FockBasis::triangular(state.basis.max_total))?
    };
    let basis = state.basis.clone();
    let sectors: Vec<(std::ops::Range<usize>, CMatrix)> = (0..=basis.max_total)
        .map(|t| (basis.sector(t), beam_splitter_sector(t)))
        .collect();
    let repr = match state.repr {
        Repr::Pure(v) => {
            let mut out = DVector::zeros(v.len());
            for (range, u) in &sectors {
                let block = u * v.rows(range.start, range.len());
                out.rows_mut(range.start, range.len()).copy_from(&block);
            }
            Repr::Pure(out)
        }
        Repr::Mixed(rho) => {
            let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
            for (rows, u) in &sectors {
                for (cols, w) in &sectors {
                    let block = rho.view((rows.start, cols.start), (rows.len(), cols.len()));
                    let mapped = u * block * w.adjoint();
                    out.view_mut((rows.start, cols.start), (rows.len(), cols.len()))
                        .copy_from(&mapped);
                }
            }
            Repr::Mixed(out)
        }
    };
    Ok(FockState { basis, repr, deficit: state.deficit })
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// Pure-loss channel of transmissivity `eta` on `mode`, as the Kraus sum
/// `A_k|m⟩ = √C(m,k) η^{(m−k)/2} (1−η)^{k/2} |m−k⟩`.
pub fn apply_loss(state: &FockState, mode: usize, eta: f64) -> Result<FockState> {
    check_mode(mode)?;
    check_eta("eta", eta)?;
    if eta == 1.0 {
        return Ok(state.clone());
    }
    let (basis, rho, deficit) = state.clone().into_mixed();
    let dim = basis.dim();
    let kmax = basis.cutoff;
    let lf = ln_factorials(kmax + basis.max_total + 1);
    let (st, sl) = (eta.sqrt(), (1.0 - eta).sqrt());
    // terms[i] lists (source index, A_k(m_i + k)) for every k that stays in the basis.
    let terms: Vec<Vec<(usize, f64)>> = (0..dim)
        .map(|i| {
            let m = basis.photons(i, mode);
            (0..=kmax)
                .map_while(|k| basis.raised(i, mode, k).map(|j| (j, k)))
                .map(|(j, k)| {
                    let binom = (lf[m + k] - lf[m] - lf[k]).exp();
                    (j, binom.sqrt() * st.powi(m as i32) * sl.powi(k as i32))
                })
                .collect()
        })
        .collect();
    let columns: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|col| {
            let tc = &terms[col];
            (0..dim)
                .map(|row| {
                    terms[row]
                        .iter()
                        .zip(tc)
                        .map(|(&(ri, ra), &(ci, ca))| rho[(ri, ci)] * (ra * ca))
                        .sum()
                })
                .collect()
        })
        .collect();
    let out = CMatrix::from_fn(dim, dim, |i, j| columns[j][i]);
    Ok(FockState { basis, repr: Repr::Mixed(out), deficit })
}

/// `⟨(−1)^{a†a}⟩` on `mode`.
pub fn parity_fock(state: &FockState, mode: usize) -> Result<f64> {
    check_mode(mode)?;
    let sign = |i: usize| if state.basis.photons(i, mode).is_multiple_of(2) { 1.0 } else { -1.0 };
    let total: f64 = match &state.repr {
        Repr::Pure(v) => v.iter().enumerate().map(|(i, a)| sign(i) * a.norm_sqr()).sum(),
        Repr::Mixed(rho) => (0..rho.nrows()).map(|i| sign(i) * rho[(i, i)].re).sum(),
    };
    Ok(total / state.trace())
}

fn check_deficit(state: &FockState) -> Result<()> {
    if state.deficit > TRUNCATION_TOL {
        return Err(Error::Truncation { deficit: state.deficit, tolerance: TRUNCATION_TOL });
    }
    Ok(())
}

/// TMSV with phase `phi` on arm 1 followed by losses `eta1`, `eta2`.
pub fn lossy_tmsv_fock(r: f64, eta1: f64, eta2: f64, phi: f64, cutoff: usize) -> Result<FockState> {
    let s = apply_phase(&tmsv_fock(r, cutoff)?, phi);
    apply_loss(&apply_loss(&s, 0, eta1)?, 1, eta2)
}

/// Connected components of the union of the nonzero patterns of `mats`.
fn components(mats: &[&CMatrix]) -> Vec<Vec<usize>> {
    let dim = mats[0].nrows();
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for j in 0..dim {
        for i in 0..dim {
            if mats.iter().any(|m| m[(i, j)] != Complex64::new(0.0, 0.0)) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for i in 0..dim {
        let root = find(&mut parent, i);
        groups[root].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

/// `2 Σ |⟨i|∂ρ|j⟩|² / (λ_i + λ_j)` over eigenpairs of `rho` with `λ_i + λ_j > SLD_FLOOR`.
pub fn sld_qfi(rho: &CMatrix, drho: &CMatrix) -> f64 {
    let mut total = 0.0;
    for group in components(&[rho, drho]) {
        let k = group.len();
        let sub = |m: &CMatrix| CMatrix::from_fn(k, k, |a, b| m[(group[a], group[b])]);
        let eig = SymmetricEigen::new(sub(rho));
        let v = &eig.eigenvectors;
        let d = v.adjoint() * sub(drho) * v;
        for i in 0..k {
            for j in 0..k {
                let s = eig.eigenvalues[i] + eig.eigenvalues[j];
                if s > SLD_FLOOR {
                    total += 2.0 * d[(i, j)].norm_sqr() / s;
                }
            }
        }
    }
    total
}

/// QFI of the lossy TMSV from the spectrum of `ρ_φ`, with `∂_φ ρ` by central
/// differences at steps `h` and `h/2` combined by Richardson extrapolation.
pub fn qfi_fock(r: f64, eta1: f64, eta2: f64, phi: f64, cutoff: usize) -> Result<f64> {
    // Loss commutes with the phase on arm 1, so the lossy state is built once.
    let base = lossy_tmsv_fock(r, eta1, eta2, 0.0, cutoff)?;
    check_deficit(&base)?;
    let at = |p: f64| apply_phase(&base, p).density();
    let central = |h: f64| (at(phi + h) - at(phi - h)).unscale(2.0 * h);
    let h = DERIVATIVE_STEP;
    let drho = (central(0.5 * h).scale(4.0) - central(h)).unscale(3.0);
    Ok(sld_qfi(&at(phi), &drho))
}

/// Parity of output port 1 for the full interferometer: TMSV, beam splitter, phase,
/// losses, beam splitter.
pub fn parity_expectation_fock(cfg: &LossyMziConfig, cutoff: usize) -> Result<f64> {
    let input = tmsv_fock(cfg.squeezing(), cutoff)?;
    check_deficit(&input)?;
    let s = apply_phase(&apply_beamsplitter_50(&input)?, cfg.phi);
    let s = apply_loss(&apply_loss(&s, 0, cfg.eta1)?, 1, cfg.eta2)?;
    parity_fock(&apply_beamsplitter_50(&s)?, 0)
}

/// Root fidelity `Σ_k √(p_k q_k)` of two single-mode thermal states with symplectic
/// eigenvalues `nu1`, `nu2`, summed over `k ≤ cutoff`.
pub fn thermal_root_fidelity_fock(nu1: f64, nu2: f64, cutoff: usize) -> f64 {
    let x1 = (nu1 - 1.0) / (nu1 + 1.0);
    let x2 = (nu2 - 1.0) / (nu2 + 1.0);
    let ratio = (x1 * x2).sqrt();
    let pref = ((1.0 - x1) * (1.0 - x2)).sqrt();
    (0..=cutoff).map(|k| pref * ratio.powi(k as i32)).sum()
}

/// Mean total photon number `⟨a1†a1 + a2†a2⟩`.
pub fn mean_photons(state: &FockState) -> f64 {
    let b = state.basis();
    (0..b.dim())
        .map(|i| {
            let (m1, m2) = b.state(i);
            (m1 + m2) as f64 * state.probability(m1, m2)
        })
        .sum::<f64>()
        / state.trace()
}
