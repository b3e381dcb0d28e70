//! The flow operator 𝔖 on matrix coefficient paths: `𝔖(u) = f` with
//! `f' = u f`, `f(x₀) = I`, integrated by fixed-step RK4 in `f64`.
//!
//! Paths built from other paths' flows (`u + 𝔖(u)·v·𝔖(u)⁻¹` and its
//! nestings) are integrated jointly with the flows they depend on, so every
//! RK4 stage sees consistent values.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, NamedMatrix};
use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;

/// `Σ_k C_k x^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Vec<f64>>>", into = "Vec<Vec<Vec<f64>>>")]
pub struct PolyPath {
    coeffs: Vec<RealMatrix>,
}

impl PolyPath {
    pub fn new(coeffs: Vec<RealMatrix>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Parse(
                "coefficient path needs at least one matrix".into(),
            ));
        };
        let n = first.nrows();
        if n == 0 {
            return Err(Error::Parse("coefficient path has dimension 0".into()));
        }
        for c in &coeffs {
            if c.nrows() != n || c.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.nrows().max(c.ncols()),
                });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse(
                    "coefficient path has a non-finite entry".into(),
                ));
            }
        }
        Ok(PolyPath { coeffs })
    }

    pub fn constant(m: RealMatrix) -> Self {
        PolyPath { coeffs: vec![m] }
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(RealMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> RealMatrix {
        let mut acc = RealMatrix::zeros(self.dim(), self.dim());
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl TryFrom<Vec<Vec<Vec<f64>>>> for PolyPath {
    type Error = Error;

    fn try_from(raw: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let coeffs = raw
            .into_iter()
            .map(|rows| {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse("coefficient matrix is not square".into()));
                }
                Ok(RealMatrix::from_fn(n, n, |i, j| rows[i][j]))
            })
            .collect::<Result<Vec<_>>>()?;
        PolyPath::new(coeffs)
    }
}

impl From<PolyPath> for Vec<Vec<Vec<f64>>> {
    fn from(p: PolyPath) -> Self {
        p.coeffs
            .iter()
            .map(|c| {
                (0..c.nrows())
                    .map(|i| c.row(i).iter().copied().collect())
                    .collect()
            })
            .collect()
    }
}

/// A coefficient path, possibly built from flows of other paths.
#[derive(Clone, Debug, PartialEq)]
pub enum Path {
    Poly(PolyPath),
    Sum(Box<Path>, Box<Path>),
    Neg(Box<Path>),
    /// `𝔖(p)·q·𝔖(p)⁻¹`.
    Conj(Box<Path>, Box<Path>),
    /// `𝔖(p)⁻¹·q·𝔖(p)`.
    ConjInv(Box<Path>, Box<Path>),
}

impl Path {
    pub fn poly(p: PolyPath) -> Self {
        Path::Poly(p)
    }

    pub fn dim(&self) -> usize {
        match self {
            Path::Poly(p) => p.dim(),
            Path::Sum(a, _) | Path::Neg(a) | Path::Conj(a, _) | Path::ConjInv(a, _) => a.dim(),
        }
    }

    fn check_dims(&self) -> Result<usize> {
        match self {
            Path::Poly(p) => Ok(p.dim()),
            Path::Neg(a) => a.check_dims(),
            Path::Sum(a, b) | Path::Conj(a, b) | Path::ConjInv(a, b) => {
                let (m, n) = (a.check_dims()?, b.check_dims()?);
                if m != n {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        found: n,
                    });
                }
                Ok(m)
            }
        }
    }

    /// Paths whose flows this path reads, innermost first.
    fn conjugators(&self, out: &mut Vec<Path>) {
        match self {
            Path::Poly(_) => {}
            Path::Neg(a) => a.conjugators(out),
            Path::Sum(a, b) => {
                a.conjugators(out);
                b.conjugators(out);
            }
            Path::Conj(p, q) | Path::ConjInv(p, q) => {
                p.conjugators(out);
                q.conjugators(out);
                if !out.contains(p) {
                    out.push((**p).clone());
                }
            }
        }
    }

    fn eval(&self, x: f64, sys: &Stage) -> RealMatrix {
        match self {
            Path::Poly(p) => p.eval(x),
            Path::Sum(a, b) => a.eval(x, sys) + b.eval(x, sys),
            Path::Neg(a) => -a.eval(x, sys),
            Path::Conj(p, q) => {
                let k = sys.index(p);
                &sys.flows[k] * q.eval(x, sys) * &sys.inverses[k]
            }
            Path::ConjInv(p, q) => {
                let k = sys.index(p);
                &sys.inverses[k] * q.eval(x, sys) * &sys.flows[k]
            }
        }
    }
}

/// `u ∗ v = u + 𝔖(u)·v·𝔖(u)⁻¹`.
pub fn ode_descent_mul(u: &Path, v: &Path) -> Path {
    Path::Sum(
        Box::new(u.clone()),
        Box::new(Path::Conj(Box::new(u.clone()), Box::new(v.clone()))),
    )
}

/// `−𝔖(u)⁻¹·u·𝔖(u)`.
pub fn ode_inverse(u: &Path) -> Path {
    Path::Neg(Box::new(Path::ConjInv(
        Box::new(u.clone()),
        Box::new(u.clone()),
    )))
}

/// Uniform grid on `[x0, x1]` with step `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub h: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            x0: 0.0,
            x1: 1.0,
            h: 1.0 / 1024.0,
        }
    }
}

impl Grid {
    pub fn with_step(self, h: f64) -> Self {
        Grid { h, ..self }
    }

    pub fn steps(&self) -> Result<usize> {
        let len = self.x1 - self.x0;
        if !(self.h > 0.0) || !self.h.is_finite() || !(len > 0.0) || !len.is_finite() {
            return Err(Error::Precondition(format!(
                "grid needs x1 > x0 and h > 0, got [{}, {}] with h = {}",
                self.x0, self.x1, self.h
            )));
        }
        let n = (len / self.h).round();
        if n < 1.0 || ((n * self.h) - len).abs() > 1e-9 * len.max(1.0) {
            return Err(Error::Precondition(format!(
                "step {} does not divide [{}, {}]",
                self.h, self.x0, self.x1
            )));
        }
        Ok(n as usize)
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let n = self.steps()?;
        Ok((0..=n).map(|k| self.x0 + k as f64 * self.h).collect())
    }
}

/// Flows of the tracked paths at one RK4 stage, with their inverses.
struct Stage<'a> {
    tracked: &'a [Path],
    flows: Vec<RealMatrix>,
    inverses: Vec<RealMatrix>,
}

impl Stage<'_> {
    fn index(&self, p: &Path) -> usize {
        self.tracked
            .iter()
            .position(|t| t == p)
            .expect("conjugator is tracked")
    }
}

fn invert(m: &RealMatrix, x: f64) -> Result<RealMatrix> {
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::FlowBlowUp {
            x,
            reason: "flow is numerically singular".into(),
        })
}

fn stage<'a>(tracked: &'a [Path], flows: Vec<RealMatrix>, x: f64) -> Result<Stage<'a>> {
    if flows.iter().any(|f| f.iter().any(|v| !v.is_finite())) {
        return Err(Error::FlowBlowUp {
            x,
            reason: "non-finite flow value".into(),
        });
    }
    let inverses = flows.iter().map(|f| invert(f, x)).collect::<Result<_>>()?;
    Ok(Stage {
        tracked,
        flows,
        inverses,
    })
}

fn derivatives(x: f64, s: &Stage) -> Vec<RealMatrix> {
    s.tracked
        .iter()
        .zip(&s.flows)
        .map(|(p, f)| p.eval(x, s) * f)
        .collect()
}

fn axpy(base: &[RealMatrix], k: &[RealMatrix], c: f64) -> Vec<RealMatrix> {
    base.iter().zip(k).map(|(b, d)| b + d * c).collect()
}

/// RK4 on the joint system `F_p' = p(x) F_p` for every tracked `p`. Returns,
/// for each grid point, the tracked flows and the value of `target` there.
fn integrate(
    tracked: &[Path],
    target: &Path,
    grid: &Grid,
) -> Result<Vec<(Vec<RealMatrix>, RealMatrix)>> {
    let n = grid.steps()?;
    let dim = target.dim();
    let h = grid.h;
    let mut y: Vec<RealMatrix> = tracked
        .iter()
        .map(|_| RealMatrix::identity(dim, dim))
        .collect();
    let mut out = Vec::with_capacity(n + 1);
    for step in 0..=n {
        let x = grid.x0 + step as f64 * h;
        let s1 = stage(tracked, y.clone(), x)?;
        let value = target.eval(x, &s1);
        if step == n {
            out.push((y, value));
            break;
        }
        let k1 = derivatives(x, &s1);
        let s2 = stage(tracked, axpy(&y, &k1, h / 2.0), x + h / 2.0)?;
        let k2 = derivatives(x + h / 2.0, &s2);
        let s3 = stage(tracked, axpy(&y, &k2, h / 2.0), x + h / 2.0)?;
        let k3 = derivatives(x + h / 2.0, &s3);
        let s4 = stage(tracked, axpy(&y, &k3, h), x + h)?;
        let k4 = derivatives(x + h, &s4);
        let next: Vec<RealMatrix> = (0..y.len())
            .map(|i| &y[i] + (&k1[i] + &k2[i] * 2.0 + &k3[i] * 2.0 + &k4[i]) * (h / 6.0))
            .collect();
        out.push((std::mem::replace(&mut y, next), value));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSolution {
    pub grid: Vec<f64>,
    pub values: Vec<RealMatrix>,
    pub step: f64,
}

impl FlowSolution {
    pub fn at_end(&self) -> &RealMatrix {
        self.values.last().expect("nonempty grid")
    }
}

/// `𝔖(u)` on the grid; fails with "flow blow-up" on non-finite values or a
/// determinant outside `[e^{−L}, e^{L}]`, `L = dim·∫ max|uᵢⱼ|`.
pub fn solve_ivp(u: &Path, grid: &Grid) -> Result<FlowSolution> {
    u.check_dims()?;
    let mut tracked = Vec::new();
    u.conjugators(&mut tracked);
    let k = match tracked.iter().position(|t| t == u) {
        Some(k) => k,
        None => {
            tracked.push(u.clone());
            tracked.len() - 1
        }
    };
    let rows = integrate(&tracked, u, grid)?;
    let points = grid.points()?;
    let dim = u.dim() as f64;
    let mut integral = 0.0;
    let mut prev_norm: Option<f64> = None;
    let mut values = Vec::with_capacity(rows.len());
    for (x, (flows, uval)) in points.iter().zip(rows) {
        let norm = max_norm(&uval);
        if let Some(p) = prev_norm {
            integral += 0.5 * (p + norm) * grid.h;
        }
        prev_norm = Some(norm);
        let f = flows[k].clone();
        let det = f.determinant();
        let bound = dim * integral * (1.0 + 1e-3) + 1e-9;
        if !det.is_finite() || det.abs() < (-bound).exp() || det.abs() > bound.exp() {
            return Err(Error::FlowBlowUp {
                x: *x,
                reason: format!("determinant {det:e} outside [e^-{bound:.3}, e^{bound:.3}]"),
            });
        }
        values.push(f);
    }
    Ok(FlowSolution {
        grid: points,
        values,
        step: grid.h,
    })
}

/// Values of a (possibly flow-dependent) path on the grid.
pub fn sample_path(p: &Path, grid: &Grid) -> Result<Vec<RealMatrix>> {
    p.check_dims()?;
    let mut tracked = Vec::new();
    p.conjugators(&mut tracked);
    Ok(integrate(&tracked, p, grid)?
        .into_iter()
        .map(|(_, v)| v)
        .collect())
}

pub fn max_norm(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

/// Pointwise differences, keyed by grid point.
type Differences = Vec<(f64, RealMatrix)>;

fn rbivp_differences(u: &Path, v: &Path, grid: &Grid) -> Result<Differences> {
    let su = solve_ivp(u, grid)?;
    let sv = solve_ivp(v, grid)?;
    let sw = solve_ivp(&ode_descent_mul(u, v), grid)?;
    Ok((0..su.grid.len())
        .map(|i| (su.grid[i], &su.values[i] * &sv.values[i] - &sw.values[i]))
        .collect())
}

fn norms(d: &Differences) -> Vec<(f64, f64)> {
    d.iter().map(|(x, m)| (*x, max_norm(m))).collect()
}

/// `(x, ‖𝔖(u)(x)𝔖(v)(x) − 𝔖(u ∗ v)(x)‖)` on the grid.
pub fn rbivp_residuals(u: &Path, v: &Path, grid: &Grid) -> Result<Vec<(f64, f64)>> {
    Ok(norms(&rbivp_differences(u, v, grid)?))
}

fn worst(rows: &[(f64, f64)]) -> (f64, f64) {
    rows.iter()
        .fold((0.0, 0.0), |w, &(x, r)| if r > w.1 { (x, r) } else { w })
}

fn real_witness(name: String, m: &RealMatrix) -> NamedMatrix {
    NamedMatrix {
        name,
        dim: m.nrows(),
        entries: (0..m.nrows())
            .map(|i| m.row(i).iter().map(|v| format!("{v:e}")).collect())
            .collect(),
    }
}

/// Differences turned into a check against `tol`; a failure carries the worst
/// difference matrix.
fn residual_check(name: &str, diffs: &Differences, tol: f64) -> CheckResult {
    let (mut wx, mut wr, mut wm) = (0.0, 0.0, None);
    for (x, m) in diffs {
        let r = max_norm(m);
        if r > wr || wm.is_none() {
            (wx, wr, wm) = (*x, r, Some(m));
        }
    }
    let detail = format!("max residual {wr:.3e} at x = {wx}");
    if wr <= tol {
        return CheckResult::pass(name, diffs.len()).with_detail(detail);
    }
    let w = wm
        .map(|m| vec![real_witness(format!("difference at x = {wx}"), m)])
        .unwrap_or_default();
    CheckResult::fail(name, diffs.len(), w).with_detail(detail)
}

/// `max‖𝔖(u)𝔖(v) − 𝔖(w)‖ ≤ tol` with `w = u + 𝔖(u)·v·𝔖(u)⁻¹`.
pub fn check_rbivp(u: &Path, v: &Path, grid: &Grid, tol: f64) -> CheckResult {
    match rbivp_differences(u, v, grid) {
        Ok(d) => residual_check("rbivp", &d, tol),
        Err(e) => CheckResult::error("rbivp", e.to_string()),
    }
}

/// `max residual(h) / max residual(h/2)`.
pub fn convergence_ratio(u: &Path, v: &Path, grid: &Grid) -> Result<f64> {
    let coarse = worst(&rbivp_residuals(u, v, grid)?).1;
    let fine = worst(&rbivp_residuals(u, v, &grid.with_step(grid.h / 2.0))?).1;
    if fine == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(coarse / fine)
}

fn path_distance(a: &Path, b: &Path, grid: &Grid) -> Result<Differences> {
    let xs = grid.points()?;
    let va = sample_path(a, grid)?;
    let vb = sample_path(b, grid)?;
    Ok(xs
        .into_iter()
        .zip(va.iter().zip(&vb))
        .map(|(x, (p, q))| (x, p - q))
        .collect())
}

fn group_case(
    name: &str,
    cases: &[[Path; 3]],
    f: impl Fn(&[Path; 3]) -> Result<Differences>,
    tol: f64,
) -> CheckResult {
    let mut rows = Vec::new();
    for (k, c) in cases.iter().enumerate() {
        match f(c) {
            Ok(r) => rows.extend(r),
            Err(e) => return CheckResult::error(name, format!("case {k}: {e}")),
        }
    }
    residual_check(name, &rows, tol)
}

/// Associativity, unit `0` (exact), inverse `−𝔖(u)⁻¹u𝔖(u)`, and
/// `𝔖(u∗v) ≈ 𝔖(u)𝔖(v)` on the given triples.
pub fn check_ode_group(cases: &[[Path; 3]], grid: &Grid, tol: f64) -> CheckResult {
    let assoc = group_case(
        "associativity",
        cases,
        |[u, v, w]| {
            let lhs = ode_descent_mul(&ode_descent_mul(u, v), w);
            let rhs = ode_descent_mul(u, &ode_descent_mul(v, w));
            path_distance(&lhs, &rhs, grid)
        },
        tol,
    );
    let unit = group_case(
        "unit",
        cases,
        |[u, ..]| {
            let z = Path::Poly(PolyPath::zero(u.dim()));
            let mut r = path_distance(&ode_descent_mul(u, &z), u, grid)?;
            r.extend(path_distance(&ode_descent_mul(&z, u), u, grid)?);
            Ok(r)
        },
        0.0,
    );
    let inverse = group_case(
        "inverse",
        cases,
        |[u, ..]| {
            let z = Path::Poly(PolyPath::zero(u.dim()));
            let i = ode_inverse(u);
            let mut r = path_distance(&ode_descent_mul(u, &i), &z, grid)?;
            r.extend(path_distance(&ode_descent_mul(&i, u), &z, grid)?);
            Ok(r)
        },
        tol,
    );
    let hom = group_case(
        "homomorphism",
        cases,
        |[u, v, _]| rbivp_differences(u, v, grid),
        tol,
    );
    CheckResult::group("ode-group", vec![assoc, unit, inverse, hom])
}

fn m2(a: f64, b: f64, c: f64, d: f64) -> RealMatrix {
    RealMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

fn poly2(coeffs: &[[f64; 4]]) -> Path {
    Path::Poly(PolyPath {
        coeffs: coeffs.iter().map(|c| m2(c[0], c[1], c[2], c[3])).collect(),
    })
}

/// Named 2×2 polynomial paths on `[0, 1]` with entries bounded by 4.
pub fn polynomial_set() -> Vec<(&'static str, Path)> {
    vec![
        ("zero", poly2(&[[0.0, 0.0, 0.0, 0.0]])),
        ("diag", poly2(&[[1.0, 0.0, 0.0, -1.0]])),
        ("diag-ramp", poly2(&[[0.0; 4], [1.0, 0.0, 0.0, 2.0]])),
        ("nilpotent-ramp", poly2(&[[0.0; 4], [0.0, 1.0, 0.0, 0.0]])),
        ("lower-constant", poly2(&[[0.0, 0.0, 1.0, 0.0]])),
        (
            "mixed-a",
            poly2(&[
                [1.0, 0.0, 0.0, -1.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
            ]),
        ),
        (
            "mixed-b",
            poly2(&[
                [0.0, 2.0, -1.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]),
        ),
        (
            "mixed-c",
            poly2(&[
                [0.0, 1.0, 0.0, 0.5],
                [0.0, -1.0, 3.0, 0.0],
                [-1.0, 0.0, 0.0, 0.0],
            ]),
        ),
    ]
}

pub fn named_path(name: &str) -> Result<Path> {
    polynomial_set()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// The `(u, v)` pairs checked against the factorization identity.
pub fn rbivp_cases() -> Vec<(String, Path, Path)> {
    [
        ("diag", "diag-ramp"),
        ("nilpotent-ramp", "lower-constant"),
        ("zero", "mixed-a"),
        ("mixed-a", "mixed-b"),
        ("mixed-b", "mixed-c"),
        ("mixed-c", "mixed-a"),
    ]
    .iter()
    .map(|(a, b)| {
        (
            format!("{a}*{b}"),
            named_path(a).unwrap(),
            named_path(b).unwrap(),
        )
    })
    .collect()
}

/// The triples checked for the group law.
pub fn group_cases() -> Vec<(String, [Path; 3])> {
    [
        ("mixed-a", "mixed-b", "mixed-c"),
        ("nilpotent-ramp", "lower-constant", "mixed-a"),
        ("diag", "mixed-b", "diag-ramp"),
    ]
    .iter()
    .map(|(a, b, c)| {
        (
            format!("{a}*{b}*{c}"),
            [
                named_path(a).unwrap(),
                named_path(b).unwrap(),
                named_path(c).unwrap(),
            ],
        )
    })
    .collect()
}

/// A polynomial path of degree ≤ `degree` with coefficients in `[−4/3, 4/3]`,
/// so entries stay within 4 on `[0, 1]` for degree 2.
pub fn random_path<R: Rng>(rng: &mut R, dim: usize, degree: usize) -> Path {
    let coeffs = (0..=degree)
        .map(|_| RealMatrix::from_fn(dim, dim, |_, _| rng.random_range(-4.0..=4.0) / 3.0))
        .collect();
    Path::Poly(PolyPath { coeffs })
}
