//! Gradient-ascent synthesis of one- and two-qubit unitaries with
//! piecewise-constant controls.
//!
//! Segment `j` evolves under `U_j = exp(−iΔt (H_drift + Σ_c u[j][c] H_c))` and
//! the figure of merit is `F = |Tr(U_T† U_N ⋯ U_1)| / d`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{ensure, Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const UNITARY_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;
/// Below this `|Tr(U_T† U_D)|` the phase of the overlap is undefined.
const ZERO_OVERLAP: f64 = 1e-14;
/// Halvings tried before a line search gives up.
pub const MAX_HALVINGS: u32 = 30;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Pauli matrices `[σx, σy, σz]`.
pub fn paulis() -> [CMatrix; 3] {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    [
        DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    ]
}

/// `σ` acting on `spin` of an `n_qubits` register (spin 0 is the leftmost factor).
pub fn embed(op: &CMatrix, spin: usize, n_qubits: usize) -> CMatrix {
    let id = CMatrix::identity(2, 2);
    (0..n_qubits).fold(CMatrix::identity(1, 1), |acc, k| {
        acc.kronecker(if k == spin { op } else { &id })
    })
}

/// `σx` and `σy` on every spin, in that order per spin.
pub fn pauli_controls(n_qubits: usize) -> Vec<CMatrix> {
    let [x, y, _] = paulis();
    (0..n_qubits)
        .flat_map(|s| [embed(&x, s, n_qubits), embed(&y, s, n_qubits)])
        .collect()
}

fn deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn unitarity_error(u: &CMatrix) -> f64 {
    deviation(&(u.adjoint() * u), &CMatrix::identity(u.nrows(), u.ncols()))
}

/// Control-synthesis problem.
#[derive(Debug, Clone, PartialEq)]
pub struct GrapeProblem {
    n_qubits: usize,
    target: CMatrix,
    drift: CMatrix,
    controls: Vec<CMatrix>,
    n_segments: usize,
    dt: f64,
    bound: f64,
}

impl GrapeProblem {
    /// Validates shapes, unitarity of the target (1e−10) and Hermiticity of
    /// the drift and controls (1e−12). `bound` caps `|u|` per amplitude.
    pub fn new(
        n_qubits: usize,
        target: CMatrix,
        drift: CMatrix,
        controls: Vec<CMatrix>,
        n_segments: usize,
        dt: f64,
        bound: f64,
    ) -> Result<Self> {
        ensure((1..=2).contains(&n_qubits), "n_qubits", n_qubits as f64, "must be 1 or 2")?;
        let d = 1usize << n_qubits;
        let square = |m: &CMatrix| m.nrows() == d && m.ncols() == d;
        if !square(&target) || !square(&drift) || !controls.iter().all(square) {
            return Err(Error::Dimension(format!("all operators must be {d}×{d}")));
        }
        ensure(!controls.is_empty(), "controls", 0.0, "at least one control operator is required")?;
        let err = unitarity_error(&target);
        ensure(err <= UNITARY_TOL, "target", err, "target is not unitary")?;
        for h in std::iter::once(&drift).chain(&controls) {
            let err = deviation(h, &h.adjoint());
            ensure(err <= HERMITIAN_TOL, "hamiltonian", err, "drift and controls must be Hermitian")?;
        }
        ensure(n_segments >= 1, "n_segments", n_segments as f64, "must be at least 1")?;
        ensure(dt.is_finite() && dt > 0.0, "dt", dt, "must be positive")?;
        ensure(bound > 0.0, "bound", bound, "must be positive")?;
        Ok(Self {
            n_qubits,
            target,
            drift,
            controls,
            n_segments,
            dt,
            bound,
        })
    }

    /// Zero drift and `σx, σy` controls on every spin.
    pub fn with_pauli_controls(target: CMatrix, n_segments: usize, dt: f64, bound: f64) -> Result<Self> {
        let n_qubits = match target.nrows() {
            2 => 1,
            4 => 2,
            n => return Err(Error::Dimension(format!("target must be 2×2 or 4×4, got {n}×{n}"))),
        };
        let d = target.nrows();
        Self::new(n_qubits, target, CMatrix::zeros(d, d), pauli_controls(n_qubits), n_segments, dt, bound)
    }

    pub fn with_drift(mut self, drift: CMatrix) -> Result<Self> {
        let err = deviation(&drift, &drift.adjoint());
        ensure(err <= HERMITIAN_TOL, "drift", err, "must be Hermitian")?;
        if drift.shape() != self.drift.shape() {
            return Err(Error::Dimension("drift shape differs from the target".into()));
        }
        self.drift = drift;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.target.nrows()
    }

    pub fn target(&self) -> &CMatrix {
        &self.target
    }

    pub fn n_segments(&self) -> usize {
        self.n_segments
    }

    pub fn n_controls(&self) -> usize {
        self.controls.len()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    fn check_shape(&self, controls: &[Vec<f64>]) -> Result<()> {
        if controls.len() != self.n_segments || controls.iter().any(|r| r.len() != self.controls.len()) {
            return Err(Error::Dimension(format!(
                "controls must be {} segments × {} amplitudes",
                self.n_segments,
                self.controls.len()
            )));
        }
        Ok(())
    }

    fn hamiltonian(&self, amps: &[f64]) -> CMatrix {
        amps.iter()
            .zip(&self.controls)
            .fold(self.drift.clone(), |h, (&u, hc)| h + hc * c(u, 0.0))
    }

    /// Eigendecomposition of one segment plus its propagator.
    fn segment(&self, amps: &[f64]) -> Segment {
        let h = self.hamiltonian(amps);
        let eig = h.symmetric_eigen();
        let phases: Vec<Complex64> = eig.eigenvalues.iter().map(|&l| c(0.0, -self.dt * l).exp()).collect();
        let v = eig.eigenvectors;
        let u = &v * CMatrix::from_diagonal(&DVector::from_vec(phases.clone())) * v.adjoint();
        Segment {
            v,
            exponents: eig.eigenvalues.iter().map(|&l| c(0.0, -self.dt * l)).collect(),
            phases,
            u,
        }
    }
}

struct Segment {
    v: CMatrix,
    exponents: Vec<Complex64>,
    phases: Vec<Complex64>,
    u: CMatrix,
}

impl Segment {
    /// `∂U/∂u` along `−iΔt H_c`, by the divided-difference formula in the
    /// eigenbasis of the segment Hamiltonian.
    fn derivative(&self, generator: &CMatrix) -> CMatrix {
        let g = self.v.adjoint() * generator * &self.v;
        let n = g.nrows();
        let w = CMatrix::from_fn(n, n, |a, b| {
            let (ma, mb) = (self.exponents[a], self.exponents[b]);
            let diff = ma - mb;
            let phi = if diff.norm() < 1e-9 {
                ((ma + mb) * 0.5).exp()
            } else {
                (self.phases[a] - self.phases[b]) / diff
            };
            g[(a, b)] * phi
        });
        &self.v * w * self.v.adjoint()
    }
}

/// `|Tr(U_T† U_D)| / d`.
pub fn fidelity(target: &CMatrix, actual: &CMatrix) -> Result<f64> {
    if target.shape() != actual.shape() || target.nrows() != target.ncols() || target.nrows() == 0 {
        return Err(Error::Dimension(format!(
            "fidelity of {:?} and {:?}",
            target.shape(),
            actual.shape()
        )));
    }
    Ok(overlap(target, actual).norm() / target.nrows() as f64)
}

fn overlap(target: &CMatrix, actual: &CMatrix) -> Complex64 {
    (target.adjoint() * actual).trace()
}

/// `U_D = U_N ⋯ U_1`.
pub fn propagate(problem: &GrapeProblem, controls: &[Vec<f64>]) -> Result<CMatrix> {
    problem.check_shape(controls)?;
    let d = problem.dim();
    Ok(controls
        .iter()
        .fold(CMatrix::identity(d, d), |acc, amps| problem.segment(amps).u * acc))
}

fn fidelity_of(problem: &GrapeProblem, controls: &[Vec<f64>]) -> Result<f64> {
    fidelity(&problem.target, &propagate(problem, controls)?)
}

/// Exact gradient `∂F/∂u[j][c]`.
///
/// With `τ = Tr(U_T† U_D)`, `∂F/∂u = Re(τ̄ ∂τ/∂u) / (|τ| d)`. Returns zeros
/// where `τ = 0`, at which `F` is not differentiable.
pub fn gradient(problem: &GrapeProblem, controls: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    Ok(fidelity_and_gradient(problem, controls)?.1)
}

fn fidelity_and_gradient(problem: &GrapeProblem, controls: &[Vec<f64>]) -> Result<(f64, Vec<Vec<f64>>)> {
    problem.check_shape(controls)?;
    let d = problem.dim();
    let segments: Vec<Segment> = controls.iter().map(|a| problem.segment(a)).collect();
    // forward[j] = U_j ⋯ U_1 (forward[0] = I)
    let mut forward = Vec::with_capacity(segments.len() + 1);
    forward.push(CMatrix::identity(d, d));
    for s in &segments {
        let next = &s.u * forward.last().expect("non-empty");
        forward.push(next);
    }
    let tau = overlap(&problem.target, forward.last().expect("non-empty"));
    let fid = tau.norm() / d as f64;
    let mut grad = vec![vec![0.0; problem.n_controls()]; segments.len()];
    if tau.norm() < ZERO_OVERLAP {
        return Ok((fid, grad));
    }
    let generators: Vec<CMatrix> = problem.controls.iter().map(|h| h * c(0.0, -problem.dt)).collect();
    // back = U_T† U_N ⋯ U_{j+1}
    let mut back = problem.target.adjoint();
    for j in (0..segments.len()).rev() {
        for (k, gen) in generators.iter().enumerate() {
            let dtau = (&back * segments[j].derivative(gen) * &forward[j]).trace();
            grad[j][k] = (tau.conj() * dtau).re / (tau.norm() * d as f64);
        }
        back *= &segments[j].u;
    }
    Ok((fid, grad))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrapeOptions {
    /// Step size `εs` of `u ← u + εs g`.
    pub step: f64,
    pub max_iter: usize,
    /// Stop once an accepted step improves `F` by less than this.
    pub df_tol: f64,
    /// Stop once `F` reaches this.
    pub target_fidelity: f64,
}

impl Default for GrapeOptions {
    fn default() -> Self {
        Self {
            step: 1.0,
            max_iter: 2000,
            df_tol: 1e-12,
            target_fidelity: 0.9999,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    TargetReached,
    Stalled,
    LineSearchFailed,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrapeResult {
    /// `controls[j][c]`
    pub controls: Vec<Vec<f64>>,
    pub fidelity: f64,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    /// `F` after each accepted iteration, starting with the initial value.
    pub history: Vec<f64>,
}

fn clamp(controls: &mut [Vec<f64>], bound: f64) {
    for u in controls.iter_mut().flatten() {
        *u = u.clamp(-bound, bound);
    }
}

/// Gradient ascent with backtracking: a step that lowers `F` is halved up to
/// [`MAX_HALVINGS`] times. Amplitudes are clamped to the problem bound.
pub fn optimize(problem: &GrapeProblem, init: &[Vec<f64>], options: &GrapeOptions) -> Result<GrapeResult> {
    ensure(options.step.is_finite() && options.step > 0.0, "step", options.step, "must be positive")?;
    ensure(options.df_tol >= 0.0, "df_tol", options.df_tol, "must be non-negative")?;
    problem.check_shape(init)?;
    let mut controls = init.to_vec();
    clamp(&mut controls, problem.bound);
    let (mut fid, mut grad) = fidelity_and_gradient(problem, &controls)?;
    let mut history = vec![fid];
    let mut iterations = 0;
    let termination = loop {
        if fid >= options.target_fidelity {
            break Termination::TargetReached;
        }
        if iterations >= options.max_iter {
            break Termination::MaxIterations;
        }
        let mut step = options.step;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = controls.clone();
            for (row, g) in trial.iter_mut().zip(&grad) {
                for (u, gi) in row.iter_mut().zip(g) {
                    *u += step * gi;
                }
            }
            clamp(&mut trial, problem.bound);
            let f = fidelity_of(problem, &trial)?;
            if f > fid {
                accepted = Some((trial, f));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, f)) = accepted else {
            break Termination::LineSearchFailed;
        };
        iterations += 1;
        let gain = f - fid;
        controls = trial;
        (fid, grad) = fidelity_and_gradient(problem, &controls)?;
        history.push(fid);
        if gain < options.df_tol && fid < options.target_fidelity {
            break Termination::Stalled;
        }
    };
    Ok(GrapeResult {
        controls,
        fidelity: fid.min(1.0),
        iterations,
        converged: matches!(termination, Termination::TargetReached | Termination::Stalled),
        termination,
        history,
    })
}

/// Uniform controls in `[−0.1, 0.1] · bound`.
pub fn random_controls(problem: &GrapeProblem, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = 0.1 * problem.bound;
    (0..problem.n_segments)
        .map(|_| (0..problem.n_controls()).map(|_| rng.random_range(-b..=b)).collect())
        .collect()
}

/// Haar-random element of SU(2) from a normalised Gaussian 4-vector.
pub fn haar_unitary_1q(seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.iter_mut().for_each(|x| *x /= norm);
    let [a, b, cc, dd] = q;
    DMatrix::from_row_slice(2, 2, &[c(a, -dd), c(-cc, -b), c(cc, -b), c(a, dd)])
}

/// `exp(−iθ n̂·σ)` for a unit axis.
pub fn rotation(theta: f64, axis: [f64; 3]) -> CMatrix {
    let [x, y, z] = paulis();
    let gen = x * c(axis[0], 0.0) + y * c(axis[1], 0.0) + z * c(axis[2], 0.0);
    CMatrix::identity(2, 2) * c(theta.cos(), 0.0) - gen * c(0.0, theta.sin())
}
