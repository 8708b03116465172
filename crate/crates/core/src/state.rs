//! Two-photon polarization ⊗ frequency states.
//!
//! Each photon carries a polarization qubit (H = 0, V = 1) and a frequency
//! band qubit (unshifted = 0, shifted = 1). A pair lives in a 16-dim space
//! with basis index `pol_a·8 + freq_a·4 + pol_b·2 + freq_b`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{check_probability, Error, Result};
use crate::register::DensityMatrix;

pub const POL_A: usize = 0;
pub const FREQ_A: usize = 1;
pub const POL_B: usize = 2;
pub const FREQ_B: usize = 3;
pub const PAIR_QUBITS: usize = 4;
pub const PAIR_DIM: usize = 16;

/// Tolerance used for normalization checks on ensembles and matrices.
pub const NORM_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    H,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrequencyBand {
    /// ω_s on photon a, ω_i on photon b.
    Unshifted,
    /// ω_s′ on photon a, ω_i′ on photon b.
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhotonLabel {
    pub polarization: Polarization,
    pub frequency: FrequencyBand,
}

impl PhotonLabel {
    pub const fn new(polarization: Polarization, frequency: FrequencyBand) -> Self {
        Self {
            polarization,
            frequency,
        }
    }

    /// Two-bit index (pol, freq) of this label.
    pub fn index(self) -> usize {
        let p = matches!(self.polarization, Polarization::V) as usize;
        let f = matches!(self.frequency, FrequencyBand::Shifted) as usize;
        p * 2 + f
    }

    pub fn all() -> [PhotonLabel; 4] {
        use FrequencyBand::*;
        use Polarization::*;
        [
            PhotonLabel::new(H, Unshifted),
            PhotonLabel::new(H, Shifted),
            PhotonLabel::new(V, Unshifted),
            PhotonLabel::new(V, Shifted),
        ]
    }
}

/// Basis index of the product state |a⟩|b⟩.
pub fn product_index(a: PhotonLabel, b: PhotonLabel) -> usize {
    a.index() * 4 + b.index()
}

/// Error pattern relative to Φ+: polarization flip on photon a, on photon b,
/// and a relative sign between the two frequency branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ErrorPattern {
    pub flip_a: bool,
    pub flip_b: bool,
    pub phase: bool,
}

impl ErrorPattern {
    pub fn compose(self, other: ErrorPattern) -> ErrorPattern {
        ErrorPattern {
            flip_a: self.flip_a ^ other.flip_a,
            flip_b: self.flip_b ^ other.flip_b,
            phase: self.phase ^ other.phase,
        }
    }
}

/// The eight doubly entangled basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DepBasisState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
    GammaPlus,
    GammaMinus,
    UpsilonPlus,
    UpsilonMinus,
}

impl DepBasisState {
    pub const ALL: [DepBasisState; 8] = [
        DepBasisState::PhiPlus,
        DepBasisState::PhiMinus,
        DepBasisState::PsiPlus,
        DepBasisState::PsiMinus,
        DepBasisState::GammaPlus,
        DepBasisState::GammaMinus,
        DepBasisState::UpsilonPlus,
        DepBasisState::UpsilonMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> DepBasisState {
        Self::ALL[i]
    }

    pub fn errors(self) -> ErrorPattern {
        use DepBasisState::*;
        let (flip_a, flip_b) = match self {
            PhiPlus | PhiMinus => (false, false),
            PsiPlus | PsiMinus => (false, true),
            GammaPlus | GammaMinus => (true, false),
            UpsilonPlus | UpsilonMinus => (true, true),
        };
        let phase = matches!(self, PhiMinus | PsiMinus | GammaMinus | UpsilonMinus);
        ErrorPattern {
            flip_a,
            flip_b,
            phase,
        }
    }

    pub fn from_errors(e: ErrorPattern) -> DepBasisState {
        use DepBasisState::*;
        match (e.flip_a, e.flip_b, e.phase) {
            (false, false, false) => PhiPlus,
            (false, false, true) => PhiMinus,
            (false, true, false) => PsiPlus,
            (false, true, true) => PsiMinus,
            (true, false, false) => GammaPlus,
            (true, false, true) => GammaMinus,
            (true, true, false) => UpsilonPlus,
            (true, true, true) => UpsilonMinus,
        }
    }

    /// The two basis indices of the branches (unshifted, shifted) and the sign
    /// of the shifted branch.
    pub fn support(self) -> (usize, usize, f64) {
        let e = self.errors();
        let branch = |band: usize| {
            let pol_a = band ^ e.flip_a as usize;
            let pol_b = band ^ e.flip_b as usize;
            pol_a * 8 + band * 4 + pol_b * 2 + band
        };
        (branch(0), branch(1), if e.phase { -1.0 } else { 1.0 })
    }

    pub fn vector(self) -> [Complex64; PAIR_DIM] {
        let (i0, i1, sign) = self.support();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = [Complex64::new(0.0, 0.0); PAIR_DIM];
        v[i0] = Complex64::new(s, 0.0);
        v[i1] = Complex64::new(sign * s, 0.0);
        v
    }
}

impl fmt::Display for DepBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DepBasisState::*;
        let s = match self {
            PhiPlus => "Φ+",
            PhiMinus => "Φ−",
            PsiPlus => "Ψ+",
            PsiMinus => "Ψ−",
            GammaPlus => "Γ+",
            GammaMinus => "Γ−",
            UpsilonPlus => "Υ+",
            UpsilonMinus => "Υ−",
        };
        f.write_str(s)
    }
}

/// Diagonal mixture over the eight basis states plus the probability mass
/// that lies outside their span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEnsemble {
    weights: [f64; 8],
    junk: f64,
}

impl PairEnsemble {
    /// Validates weights. Round-off negatives down to -1e-12 are clamped to
    /// zero; anything larger is rejected.
    pub fn new(weights: [f64; 8], junk: f64) -> Result<Self> {
        let clamp = |w: f64| -> Result<f64> {
            if !w.is_finite() || w < -NORM_TOL {
                Err(Error::InvalidState(format!(
                    "negative or non-finite weight {w}"
                )))
            } else {
                Ok(w.max(0.0))
            }
        };
        let mut clean = [0.0; 8];
        for (c, w) in clean.iter_mut().zip(weights) {
            *c = clamp(w)?;
        }
        let junk = clamp(junk)?;
        let total: f64 = clean.iter().sum::<f64>() + junk;
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "ensemble mass {total} differs from 1"
            )));
        }
        Ok(Self {
            weights: clean,
            junk,
        })
    }

    /// Weights over the eight states, junk taken as `1 − Σ weights`.
    pub fn from_weights(weights: [f64; 8]) -> Result<Self> {
        let junk = 1.0 - weights.iter().sum::<f64>();
        Self::new(weights, junk)
    }

    pub fn pure(state: DepBasisState) -> Self {
        let mut weights = [0.0; 8];
        weights[state.index()] = 1.0;
        Self { weights, junk: 0.0 }
    }

    pub fn weight(&self, state: DepBasisState) -> f64 {
        self.weights[state.index()]
    }

    pub fn weights(&self) -> &[f64; 8] {
        &self.weights
    }

    pub fn junk(&self) -> f64 {
        self.junk
    }

    /// Total mass inside the eight-state span.
    pub fn valid_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn fidelity(&self) -> f64 {
        fidelity(self)
    }

    /// Werner form with the same fidelity and junk: the seven error states
    /// share the remaining in-span mass equally.
    pub fn twirled(&self) -> Self {
        let f = self.fidelity();
        let rest = ((self.valid_mass() - f) / 7.0).max(0.0);
        let mut weights = [rest; 8];
        weights[0] = f;
        Self {
            weights,
            junk: self.junk,
        }
    }

    pub fn max_abs_diff(&self, other: &PairEnsemble) -> f64 {
        self.weights
            .iter()
            .zip(other.weights.iter())
            .map(|(a, b)| (a - b).abs())
            .chain(std::iter::once((self.junk - other.junk).abs()))
            .fold(0.0, f64::max)
    }
}

/// Werner mixture: weight `f` on Φ+, `(1 − f)/7` on each other state.
pub fn make_werner(f: f64) -> Result<PairEnsemble> {
    check_probability("F", f)?;
    let mut weights = [(1.0 - f) / 7.0; 8];
    weights[0] = f;
    Ok(PairEnsemble { weights, junk: 0.0 })
}

pub fn fidelity(e: &PairEnsemble) -> f64 {
    e.weights[DepBasisState::PhiPlus.index()]
}

/// Exact 16×16 density matrix of one photon pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FullPairState(DensityMatrix);

impl FullPairState {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(matrix: DensityMatrix) -> Result<Self> {
        if matrix.qubits() != PAIR_QUBITS {
            return Err(Error::InvalidState(format!(
                "pair state needs {PAIR_QUBITS} qubits, got {}",
                matrix.qubits()
            )));
        }
        validate_density(&matrix)?;
        Ok(Self(matrix))
    }

    pub fn from_pure(amplitudes: &[Complex64; PAIR_DIM]) -> Result<Self> {
        Self::new(DensityMatrix::from_pure(amplitudes))
    }

    pub fn product(a: PhotonLabel, b: PhotonLabel) -> Self {
        let mut v = [Complex64::new(0.0, 0.0); PAIR_DIM];
        v[product_index(a, b)] = Complex64::new(1.0, 0.0);
        Self(DensityMatrix::from_pure(&v))
    }

    pub fn basis(state: DepBasisState) -> Self {
        Self(DensityMatrix::from_pure(&state.vector()))
    }

    pub fn maximally_mixed() -> Self {
        Self(DensityMatrix::maximally_mixed(PAIR_QUBITS))
    }

    pub fn matrix(&self) -> &DensityMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> DensityMatrix {
        self.0
    }

    pub fn weight(&self, state: DepBasisState) -> f64 {
        self.0.expectation(&state.vector())
    }

    pub fn fidelity(&self) -> f64 {
        self.weight(DepBasisState::PhiPlus)
    }

    /// Replaces the in-span part with its Werner form and keeps the part
    /// outside the span untouched.
    pub fn twirled(&self) -> Result<Self> {
        let ensemble = project_diagonal(self);
        let werner = ensemble.twirled();
        let mut out = outside_span(&self.0);
        for s in DepBasisState::ALL {
            let w = werner.weight(s);
            if w > 0.0 {
                out.add_assign(&DensityMatrix::from_pure(&s.vector()).scaled(w));
            }
        }
        Self::new(out)
    }
}

pub(crate) fn validate_density(m: &DensityMatrix) -> Result<()> {
    let herm = m.hermiticity_error();
    if herm > NORM_TOL {
        return Err(Error::InvalidState(format!(
            "not Hermitian (error {herm:.3e})"
        )));
    }
    let tr = m.trace();
    if (tr - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let min = m.min_eigenvalue();
    if min < PSD_TOL {
        return Err(Error::InvalidState(format!(
            "negative eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

/// P⊥ ρ P⊥ where P projects onto the eight-state span.
fn outside_span(m: &DensityMatrix) -> DensityMatrix {
    // The eight states span exactly the product indices with freq_a == freq_b,
    // so P is diagonal in the product basis.
    let in_span = |i: usize| ((i >> 2) & 1) == (i & 1);
    let mut data = m.matrix().clone();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            if in_span(i) || in_span(j) {
                data[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    DensityMatrix::from_matrix(data)
}

/// Σ w_s |s⟩⟨s| over the eight basis vectors.
pub fn embed(e: &PairEnsemble) -> Result<FullPairState> {
    if e.junk > NORM_TOL {
        return Err(Error::UnsupportedJunk(e.junk));
    }
    let mut m = DensityMatrix::zeros(PAIR_QUBITS);
    for s in DepBasisState::ALL {
        let w = e.weight(s);
        if w > 0.0 {
            m.add_assign(&DensityMatrix::from_pure(&s.vector()).scaled(w));
        }
    }
    FullPairState::new(m)
}

/// Diagonal weights ⟨s|ρ|s⟩ with the remainder booked as junk.
pub fn project_diagonal(m: &FullPairState) -> PairEnsemble {
    let mut weights = [0.0; 8];
    for s in DepBasisState::ALL {
        weights[s.index()] = m.weight(s).max(0.0);
    }
    let junk = (1.0 - weights.iter().sum::<f64>()).max(0.0);
    PairEnsemble { weights, junk }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FrequencyBand::*;
    use Polarization::*;

    #[test]
    fn werner_limits() {
        let pure = make_werner(1.0).unwrap();
        assert_eq!(pure, PairEnsemble::pure(DepBasisState::PhiPlus));
        let flat = make_werner(0.125).unwrap();
        assert!(flat.weights().iter().all(|&w| (w - 0.125).abs() < 1e-15));
        let half = make_werner(0.5).unwrap();
        assert_eq!(half.fidelity(), 0.5);
        assert!((half.weight(DepBasisState::UpsilonMinus) - 1.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    fn werner_rejects_out_of_range() {
        assert!(matches!(make_werner(1.2), Err(Error::Domain { .. })));
        assert!(make_werner(-0.01).is_err());
        assert!(make_werner(f64::NAN).is_err());
    }

    #[test]
    fn fidelity_examples() {
        assert_eq!(fidelity(&make_werner(0.9).unwrap()), 0.9);
        assert_eq!(fidelity(&make_werner(0.125).unwrap()), 0.125);
        assert_eq!(fidelity(&PairEnsemble::pure(DepBasisState::PsiPlus)), 0.0);
    }

    #[test]
    fn basis_vectors_match_written_kets() {
        // Γ+ = (|V,ωs⟩|H,ωi⟩ + |H,ωs′⟩|V,ωi′⟩)/√2
        let (i0, i1, sign) = DepBasisState::GammaPlus.support();
        assert_eq!(
            i0,
            product_index(
                PhotonLabel::new(V, Unshifted),
                PhotonLabel::new(H, Unshifted)
            )
        );
        assert_eq!(
            i1,
            product_index(PhotonLabel::new(H, Shifted), PhotonLabel::new(V, Shifted))
        );
        assert_eq!(sign, 1.0);
        let (i0, i1, sign) = DepBasisState::UpsilonMinus.support();
        assert_eq!(
            i0,
            product_index(
                PhotonLabel::new(V, Unshifted),
                PhotonLabel::new(V, Unshifted)
            )
        );
        assert_eq!(
            i1,
            product_index(PhotonLabel::new(H, Shifted), PhotonLabel::new(H, Shifted))
        );
        assert_eq!(sign, -1.0);
    }

    #[test]
    fn polarization_matching_pattern() {
        for s in DepBasisState::ALL {
            let (i0, _, _) = s.support();
            let same_pol = ((i0 >> 3) & 1) == ((i0 >> 1) & 1);
            let matching = matches!(
                s,
                DepBasisState::PhiPlus
                    | DepBasisState::PhiMinus
                    | DepBasisState::UpsilonPlus
                    | DepBasisState::UpsilonMinus
            );
            assert_eq!(same_pol, matching, "{s}");
        }
    }

    #[test]
    fn basis_states_orthonormal() {
        for s in DepBasisState::ALL {
            let rho = FullPairState::basis(s);
            for t in DepBasisState::ALL {
                let overlap = rho.weight(t);
                let expected = if s == t { 1.0 } else { 0.0 };
                assert!((overlap - expected).abs() < 1e-12, "{s} {t}");
            }
        }
    }

    #[test]
    fn error_pattern_round_trip() {
        for s in DepBasisState::ALL {
            assert_eq!(DepBasisState::from_errors(s.errors()), s);
        }
    }

    #[test]
    fn embed_pure_is_projector() {
        let m = embed(&PairEnsemble::pure(DepBasisState::PhiPlus)).unwrap();
        assert!(
            m.matrix()
                .distance(FullPairState::basis(DepBasisState::PhiPlus).matrix())
                < 1e-15
        );
    }

    #[test]
    fn embed_flat_werner_is_mixed_on_span() {
        let m = embed(&make_werner(0.125).unwrap()).unwrap();
        let eig = m.matrix().eigenvalues();
        let nonzero = eig.iter().filter(|v| v.abs() > 1e-12).count();
        assert_eq!(nonzero, 8);
        assert!(eig
            .iter()
            .all(|v| v.abs() < 1e-12 || (v - 0.125).abs() < 1e-12));
    }

    #[test]
    fn embed_rejects_junk() {
        let e = PairEnsemble::new([0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 0.5).unwrap();
        assert!(matches!(embed(&e), Err(Error::UnsupportedJunk(_))));
    }

    #[test]
    fn project_round_trip() {
        let w = make_werner(0.7).unwrap();
        let back = project_diagonal(&embed(&w).unwrap());
        assert!(back.max_abs_diff(&w) < 1e-12);
    }

    #[test]
    fn project_maximally_mixed() {
        // Oracle: ⟨s|I/16|s⟩ = 1/16 for each of the eight unit vectors.
        let e = project_diagonal(&FullPairState::maximally_mixed());
        assert!(e.weights().iter().all(|&w| (w - 1.0 / 16.0).abs() < 1e-14));
        assert!((e.junk() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn project_product_state() {
        // |H,ωs⟩|H,ωi⟩ = (Φ+ + Φ−)/√2
        let m = FullPairState::product(
            PhotonLabel::new(H, Unshifted),
            PhotonLabel::new(H, Unshifted),
        );
        let e = project_diagonal(&m);
        assert!((e.weight(DepBasisState::PhiPlus) - 0.5).abs() < 1e-14);
        assert!((e.weight(DepBasisState::PhiMinus) - 0.5).abs() < 1e-14);
        assert!(e.junk() < 1e-14);
    }

    #[test]
    fn ensemble_rejects_bad_mass() {
        assert!(PairEnsemble::new([0.5; 8], 0.0).is_err());
        assert!(PairEnsemble::new([-0.1, 1.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn twirl_keeps_fidelity_and_junk() {
        let e = PairEnsemble::new([0.6, 0.2, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0], 0.1).unwrap();
        let t = e.twirled();
        assert_eq!(t.fidelity(), 0.6);
        assert_eq!(t.junk(), 0.1);
        assert!((t.weight(DepBasisState::PsiMinus) - 0.3 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn full_twirl_matches_ensemble_twirl() {
        let m =
            FullPairState::product(PhotonLabel::new(H, Unshifted), PhotonLabel::new(V, Shifted));
        let t = m.twirled().unwrap();
        assert!(project_diagonal(&t).max_abs_diff(&project_diagonal(&m).twirled()) < 1e-14);
    }
}
