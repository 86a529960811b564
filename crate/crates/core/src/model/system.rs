//! System data: speeds, coupling, boundary matrix, and their validation.
//!
//! Component indices are 0-based throughout the API: components `0..k` form
//! the negative-speed ("minus") family and `k..k+m` the positive-speed
//! ("plus") family. Add one to match the usual 1-based numbering.

use std::fmt;

use super::matrix::Matrix;
use super::profile::{Profile, ProfileMatrix};
use crate::error::{Error, Result};

/// Thresholds used to accept or reject system data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for "invertible" in trailing-minor tests.
    pub det_tol: f64,
    /// Minimum separation between consecutive speeds (and from zero).
    pub speed_gap: f64,
    /// Largest accepted finite-difference slope of a speed profile.
    pub lipschitz_max: f64,
    /// Largest accepted coupling entry.
    pub coupling_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            det_tol: 1e-10,
            speed_gap: 1e-9,
            lipschitz_max: 1e6,
            coupling_max: 1e6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Dimension,
    NonPositiveSpeed,
    Ordering,
    Lipschitz,
    SampleGrid,
    NonFinite,
    CouplingBound,
    StructuralZero,
}

/// One violated invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
}

impl Diagnostic {
    fn new(kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// The characteristic speeds `λ_1 .. λ_n` (all stored positive; the minus
/// family travels with velocity `-λ_i`).
#[derive(Clone, Debug, PartialEq)]
pub struct SpeedProfile {
    k: usize,
    m: usize,
    speeds: Vec<Profile>,
}

impl SpeedProfile {
    pub fn new(k: usize, m: usize, speeds: Vec<Profile>) -> Result<Self> {
        let s = Self::new_unchecked(k, m, speeds);
        let diags = s.diagnostics(&Tolerances::default());
        if diags.is_empty() {
            Ok(s)
        } else {
            Err(Error::InvalidSystem(diags))
        }
    }

    pub fn constant(k: usize, m: usize, speeds: &[f64]) -> Result<Self> {
        Self::new(k, m, speeds.iter().map(|&v| Profile::Constant(v)).collect())
    }

    /// Build without checking invariants; pair with [`SpeedProfile::diagnostics`].
    pub fn new_unchecked(k: usize, m: usize, speeds: Vec<Profile>) -> Self {
        Self { k, m, speeds }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.speeds.len()
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.speeds
    }

    pub fn profile(&self, i: usize) -> Result<&Profile> {
        self.speeds.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.speeds.len(),
        })
    }

    pub fn max_speed(&self) -> f64 {
        self.speeds.iter().map(Profile::max).fold(0.0, f64::max)
    }

    /// Nodes at which ordering is checked: the shared sample grid, or a
    /// single point when every speed is constant.
    fn check_points(&self) -> Vec<f64> {
        match self.speeds.iter().filter_map(Profile::sample_count).max() {
            Some(len) => (0..len).map(|j| j as f64 / (len - 1) as f64).collect(),
            None => vec![0.0],
        }
    }

    pub fn diagnostics(&self, tol: &Tolerances) -> Vec<Diagnostic> {
        use DiagnosticKind::*;
        let mut out = Vec::new();
        let (k, m) = (self.k, self.m);
        if k < 1 || m < 1 {
            out.push(Diagnostic::new(
                Dimension,
                format!("need k >= 1 and m >= 1 (k = {k}, m = {m})"),
            ));
        }
        if self.speeds.len() != k + m {
            out.push(Diagnostic::new(
                Dimension,
                format!(
                    "{} speed profiles supplied but k + m = {}",
                    self.speeds.len(),
                    k + m
                ),
            ));
            return out;
        }
        let counts: Vec<usize> = self.speeds.iter().filter_map(Profile::sample_count).collect();
        if counts.iter().any(|&c| c < 2) {
            out.push(Diagnostic::new(SampleGrid, "sampled speed needs at least 2 nodes"));
            return out;
        }
        if counts.windows(2).any(|w| w[0] != w[1]) {
            out.push(Diagnostic::new(
                SampleGrid,
                "sampled speeds must share one sample grid",
            ));
            return out;
        }
        for (i, p) in self.speeds.iter().enumerate() {
            if !p.is_finite() {
                out.push(Diagnostic::new(
                    NonFinite,
                    format!("speed of component {} has non-finite samples", i + 1),
                ));
                return out;
            }
            if p.min() <= tol.speed_gap {
                out.push(Diagnostic::new(
                    NonPositiveSpeed,
                    format!(
                        "speed of component {} must stay above {} (min {})",
                        i + 1,
                        tol.speed_gap,
                        p.min()
                    ),
                ));
            }
            if p.lipschitz_estimate() > tol.lipschitz_max {
                out.push(Diagnostic::new(
                    Lipschitz,
                    format!(
                        "speed of component {} has slope {} above {}",
                        i + 1,
                        p.lipschitz_estimate(),
                        tol.lipschitz_max
                    ),
                ));
            }
        }
        for x in self.check_points() {
            let lam: Vec<f64> = self.speeds.iter().map(|p| p.eval(x)).collect();
            // minus family: λ_1 > λ_2 > ... > λ_k
            for i in 1..k {
                if lam[i - 1] - lam[i] < tol.speed_gap {
                    out.push(Diagnostic::new(
                        Ordering,
                        format!(
                            "strict ordering violated at x = {x}: λ_{} = {} must exceed λ_{} = {}",
                            i,
                            lam[i - 1],
                            i + 1,
                            lam[i]
                        ),
                    ));
                }
            }
            // plus family: λ_{k+1} < ... < λ_{k+m}
            for i in k + 1..k + m {
                if lam[i] - lam[i - 1] < tol.speed_gap {
                    out.push(Diagnostic::new(
                        Ordering,
                        format!(
                            "strict ordering violated at x = {x}: λ_{} = {} must exceed λ_{} = {}",
                            i + 1,
                            lam[i],
                            i,
                            lam[i - 1]
                        ),
                    ));
                }
            }
            if out.iter().any(|d| d.kind == Ordering) {
                break;
            }
        }
        out
    }
}

/// The lower-order term: either `C(x) w` or the nonlocal `S(x) u(t, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Coupling {
    /// `C(x)`, an `n x n` matrix of profiles acting pointwise.
    WForm(ProfileMatrix),
    /// `S(x)`, an `n x n` matrix acting on the boundary value `u(t, 0)`.
    /// Only the plus columns may be nonzero, and the plus-plus block must be
    /// strictly upper triangular.
    UForm(ProfileMatrix),
}

impl Coupling {
    pub fn zero_w(n: usize) -> Self {
        Coupling::WForm(ProfileMatrix::zeros(n, n))
    }

    pub fn zero_u(n: usize) -> Self {
        Coupling::UForm(ProfileMatrix::zeros(n, n))
    }

    pub fn matrix(&self) -> &ProfileMatrix {
        match self {
            Coupling::WForm(c) | Coupling::UForm(c) => c,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix().is_zero()
    }

    pub fn is_u_form(&self) -> bool {
        matches!(self, Coupling::UForm(_))
    }

    pub fn form_name(&self) -> &'static str {
        match self {
            Coupling::WForm(_) => "w",
            Coupling::UForm(_) => "u",
        }
    }
}

/// The constant `k x m` matrix in `w_-(t, 0) = B w_+(t, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryMatrix(pub Matrix);

impl BoundaryMatrix {
    pub fn new(b: Matrix) -> Self {
        Self(b)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Ok(Self(Matrix::from_rows(rows)?))
    }

    pub fn k(&self) -> usize {
        self.0.rows()
    }

    pub fn m(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// Complete problem datum.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicSystem {
    speeds: SpeedProfile,
    coupling: Coupling,
    boundary: BoundaryMatrix,
}

impl HyperbolicSystem {
    pub fn new(speeds: SpeedProfile, coupling: Coupling, boundary: BoundaryMatrix) -> Result<Self> {
        let sys = Self::new_unchecked(speeds, coupling, boundary);
        let diags = validate(&sys);
        if diags.is_empty() {
            Ok(sys)
        } else {
            Err(Error::InvalidSystem(diags))
        }
    }

    pub fn new_unchecked(speeds: SpeedProfile, coupling: Coupling, boundary: BoundaryMatrix) -> Self {
        Self {
            speeds,
            coupling,
            boundary,
        }
    }

    /// Constant speeds, zero coupling of the requested form, and `B`.
    pub fn constant(k: usize, m: usize, speeds: &[f64], u_form: bool, b: &[Vec<f64>]) -> Result<Self> {
        let n = k + m;
        let coupling = if u_form {
            Coupling::zero_u(n)
        } else {
            Coupling::zero_w(n)
        };
        Self::new(
            SpeedProfile::constant(k, m, speeds)?,
            coupling,
            BoundaryMatrix::from_rows(b)?,
        )
    }

    pub fn speeds(&self) -> &SpeedProfile {
        &self.speeds
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn boundary(&self) -> &BoundaryMatrix {
        &self.boundary
    }

    pub fn n(&self) -> usize {
        self.speeds.n()
    }

    pub fn k(&self) -> usize {
        self.speeds.k()
    }

    pub fn m(&self) -> usize {
        self.speeds.m()
    }

    pub fn with_coupling(&self, coupling: Coupling) -> Result<Self> {
        Self::new(self.speeds.clone(), coupling, self.boundary.clone())
    }

    pub fn with_boundary(&self, boundary: BoundaryMatrix) -> Result<Self> {
        Self::new(self.speeds.clone(), self.coupling.clone(), boundary)
    }
}

/// List every violated invariant; empty when the system is valid.
pub fn validate(system: &HyperbolicSystem) -> Vec<Diagnostic> {
    validate_with(system, &Tolerances::default())
}

pub fn validate_with(system: &HyperbolicSystem, tol: &Tolerances) -> Vec<Diagnostic> {
    use DiagnosticKind::*;
    let mut out = system.speeds.diagnostics(tol);
    let (k, m) = (system.speeds.k, system.speeds.m);
    let n = k + m;

    let b = &system.boundary.0;
    if b.rows() != k || b.cols() != m {
        out.push(Diagnostic::new(
            Dimension,
            format!("B is {}x{} but must be {k}x{m}", b.rows(), b.cols()),
        ));
    } else if b.as_slice().iter().any(|v| !v.is_finite()) {
        out.push(Diagnostic::new(NonFinite, "B has non-finite entries"));
    }

    let c = system.coupling.matrix();
    if c.rows() != n || c.cols() != n {
        out.push(Diagnostic::new(
            Dimension,
            format!(
                "coupling matrix is {}x{} but must be {n}x{n}",
                c.rows(),
                c.cols()
            ),
        ));
        return out;
    }
    if c.entries().iter().any(|p| !p.is_finite()) {
        out.push(Diagnostic::new(NonFinite, "coupling has non-finite entries"));
    }
    let counts: Vec<usize> = c.entries().iter().filter_map(Profile::sample_count).collect();
    if counts.iter().any(|&s| s < 2) {
        out.push(Diagnostic::new(SampleGrid, "sampled coupling entry needs at least 2 nodes"));
    }
    if c.max_abs() > tol.coupling_max {
        out.push(Diagnostic::new(
            CouplingBound,
            format!(
                "coupling entry of size {} exceeds bound {}",
                c.max_abs(),
                tol.coupling_max
            ),
        ));
    }
    if let Coupling::UForm(s) = &system.coupling {
        for i in 0..n {
            for j in 0..k {
                if !s.get(i, j).is_zero() {
                    out.push(Diagnostic::new(
                        StructuralZero,
                        format!(
                            "structural zero violated: S[{},{}] lies in a zero block (first k columns)",
                            i + 1,
                            j + 1
                        ),
                    ));
                }
            }
        }
        // (S_{++})_{pq} = 0 for q <= p
        for p in 0..m {
            for q in 0..=p {
                if !s.get(k + p, k + q).is_zero() {
                    out.push(Diagnostic::new(
                        StructuralZero,
                        format!(
                            "structural zero violated: (S_++)[{},{}] must vanish (strictly upper triangular)",
                            p + 1,
                            q + 1
                        ),
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two(speeds: &[f64]) -> HyperbolicSystem {
        HyperbolicSystem::new_unchecked(
            SpeedProfile::new_unchecked(
                1,
                1,
                speeds.iter().map(|&v| Profile::Constant(v)).collect(),
            ),
            Coupling::zero_u(2),
            BoundaryMatrix::from_rows(&[vec![1.0]]).unwrap(),
        )
    }

    #[test]
    fn valid_constant_system_has_no_diagnostics() {
        assert!(validate(&two_by_two(&[1.0, 1.0])).is_empty());
    }

    #[test]
    fn equal_negative_speeds_are_reported() {
        let sys = HyperbolicSystem::new_unchecked(
            SpeedProfile::new_unchecked(2, 1, vec![Profile::Constant(1.0); 3]),
            Coupling::zero_w(3),
            BoundaryMatrix::from_rows(&[vec![0.0], vec![0.0]]).unwrap(),
        );
        let diags = validate(&sys);
        assert!(diags.iter().any(|d| d.message.contains("strict ordering violated")));
    }

    #[test]
    fn plus_plus_diagonal_is_structural_zero() {
        let mut s = ProfileMatrix::zeros(3, 3);
        s.set(1, 1, Profile::Constant(0.5));
        let sys = HyperbolicSystem::new_unchecked(
            SpeedProfile::new_unchecked(
                1,
                2,
                vec![Profile::Constant(1.0), Profile::Constant(1.0), Profile::Constant(2.0)],
            ),
            Coupling::UForm(s),
            BoundaryMatrix::from_rows(&[vec![0.5, 1.0]]).unwrap(),
        );
        let diags = validate(&sys);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("structural zero violated"));
    }

    #[test]
    fn strictly_upper_plus_plus_is_accepted() {
        let mut s = ProfileMatrix::zeros(3, 3);
        s.set(1, 2, Profile::Constant(0.5));
        s.set(0, 1, Profile::sampled(4, |x| x));
        let sys = HyperbolicSystem::new(
            SpeedProfile::constant(1, 2, &[1.0, 1.0, 2.0]).unwrap(),
            Coupling::UForm(s),
            BoundaryMatrix::from_rows(&[vec![0.5, 1.0]]).unwrap(),
        );
        assert!(sys.is_ok());
    }

    #[test]
    fn boundary_shape_is_checked() {
        let sys = HyperbolicSystem::new_unchecked(
            SpeedProfile::new_unchecked(1, 1, vec![Profile::Constant(1.0); 2]),
            Coupling::zero_u(2),
            BoundaryMatrix::from_rows(&[vec![1.0, 2.0]]).unwrap(),
        );
        assert!(validate(&sys).iter().any(|d| d.kind == DiagnosticKind::Dimension));
    }

    #[test]
    fn non_positive_and_steep_speeds_are_reported() {
        let tol = Tolerances {
            lipschitz_max: 10.0,
            ..Tolerances::default()
        };
        let sp = SpeedProfile::new_unchecked(
            1,
            1,
            vec![Profile::Constant(-1.0), Profile::sampled(4, |x| 1.0 + 100.0 * x)],
        );
        let kinds: Vec<_> = sp.diagnostics(&tol).iter().map(|d| d.kind).collect();
        assert!(kinds.contains(&DiagnosticKind::NonPositiveSpeed));
        assert!(kinds.contains(&DiagnosticKind::Lipschitz));
    }
}
