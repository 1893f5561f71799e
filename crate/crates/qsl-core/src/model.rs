//! Drift and control-operator construction for 1..N qubit systems.
//!
//! Units: hbar = 1 and the first qubit gap sets the energy scale
//! (Delta_1 = 1), so times are dimensionless. Each qubit contributes
//! `-Delta/2 sigma_x - eps/2 sigma_z`; pairs couple through either
//! `J sigma_z sigma_z` (Ising) or the isotropic Heisenberg form. The
//! coupling strength J is always a fixed parameter, never a control.

use crate::linalg::{kron, pauli, pauli_embed, Axis, CMatrix, C64};
use serde::{Deserialize, Serialize};

/// Default bound on |eps_i(t)| in units of Delta_1.
pub const DEFAULT_EPSILON_BOUND: f64 = 20.0;
/// Default upper bound on a tunable Delta_i(t), in units of Delta_1.
pub const DEFAULT_DELTA_BOUND: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("system must contain at least one qubit")]
    EmptySystem,
    #[error("coupling edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("coupling edge ({0}, {1}) references qubit outside 1..={2}")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("duplicate coupling edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("qubit {0}: delta must be > 0 (got {1})")]
    BadDelta(usize, f64),
    #[error("qubit {0}: amplitude bounds must be >= 0")]
    BadBound(usize),
}

/// Per-qubit Hamiltonian parameters, in units of Delta_1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    /// Gap Delta_i (sigma_x coefficient is -delta/2).
    pub delta: f64,
    /// Static sigma_z offset; only enters the drift in fixed-delta mode.
    #[serde(default)]
    pub epsilon0: f64,
    /// Max |eps_i(t)| for the sigma_z control channel.
    #[serde(default = "default_eps_bound")]
    pub epsilon_bound: f64,
    /// Max Delta_i(t) for the sigma_x control channel (tunable-delta mode;
    /// the channel box is [0, delta_bound]).
    #[serde(default = "default_delta_bound")]
    pub delta_bound: f64,
}

fn default_eps_bound() -> f64 {
    DEFAULT_EPSILON_BOUND
}

fn default_delta_bound() -> f64 {
    DEFAULT_DELTA_BOUND
}

impl QubitParams {
    pub fn with_delta(delta: f64) -> Self {
        Self {
            delta,
            epsilon0: 0.0,
            epsilon_bound: DEFAULT_EPSILON_BOUND,
            delta_bound: DEFAULT_DELTA_BOUND,
        }
    }
}

/// Two-qubit coupling type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingKind {
    Ising,
    Heisenberg,
}

/// Coupling graph: a strength per edge, edges as 1-based qubit pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingSpec {
    pub kind: CouplingKind,
    pub strength: f64,
    pub edges: Vec<(usize, usize)>,
}

impl CouplingSpec {
    /// Path graph 1-2-..-n.
    pub fn chain(kind: CouplingKind, strength: f64, n: usize) -> Self {
        Self {
            kind,
            strength,
            edges: (1..n).map(|i| (i, i + 1)).collect(),
        }
    }

    /// 3-cycle on qubits 1, 2, 3.
    pub fn triangle(kind: CouplingKind, strength: f64) -> Self {
        Self {
            kind,
            strength,
            edges: vec![(1, 2), (2, 3), (1, 3)],
        }
    }

    pub fn none(kind: CouplingKind) -> Self {
        Self {
            kind,
            strength: 0.0,
            edges: Vec::new(),
        }
    }
}

/// Which single-qubit parameters are time-dependent controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    /// Delta_i fixed in the drift; one sigma_z channel per qubit.
    FixedDelta,
    /// Both Delta_i(t) and eps_i(t) driven; drift holds only coupling terms.
    TunableDelta,
}

/// One controllable operator with its amplitude box.
#[derive(Debug, Clone)]
pub struct Control {
    pub operator: CMatrix,
    pub lower: f64,
    pub upper: f64,
    pub label: String,
}

impl Control {
    pub fn clamp(&self, u: f64) -> f64 {
        u.clamp(self.lower, self.upper)
    }
}

/// Drift plus control operators for one scenario. Immutable once built.
#[derive(Debug, Clone)]
pub struct SystemModel {
    n: usize,
    drift: CMatrix,
    controls: Vec<Control>,
    /// J / min_i Delta_i, recorded for the energy-scale-separation guard.
    coupling_ratio: f64,
    basis_note: String,
}

impl SystemModel {
    /// Assemble a model from explicit parts; drift and every control operator
    /// must be Hermitian.
    pub fn custom(drift: CMatrix, controls: Vec<Control>, n: usize) -> Self {
        assert!(drift.is_hermitian(1e-10), "drift must be Hermitian");
        for c in &controls {
            assert!(c.operator.is_hermitian(1e-10), "control {} not Hermitian", c.label);
            assert!(c.lower <= c.upper, "control {} has empty box", c.label);
        }
        Self {
            n,
            drift,
            controls,
            coupling_ratio: 0.0,
            basis_note: "computational basis, qubit 1 leftmost".into(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.drift.dim()
    }

    pub fn drift(&self) -> &CMatrix {
        &self.drift
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn basis_note(&self) -> &str {
        &self.basis_note
    }

    /// J / min(Delta_i), as recorded at build time.
    pub fn coupling_ratio(&self) -> f64 {
        self.coupling_ratio
    }

    /// Flags scenarios that violate the J << Delta premise the analytic
    /// schedules rely on.
    pub fn scale_separation_ok(&self) -> bool {
        self.coupling_ratio <= 0.1
    }

    /// Hamiltonian at given control amplitudes (unchecked against bounds).
    pub fn hamiltonian(&self, amplitudes: &[f64]) -> CMatrix {
        assert_eq!(amplitudes.len(), self.controls.len(), "control count mismatch");
        let mut h = self.drift.clone();
        for (c, &u) in self.controls.iter().zip(amplitudes) {
            h.add_scaled(&c.operator, u);
        }
        h
    }
}

/// Build the drift and control set for `params` under `coupling`.
///
/// Fixed-delta: drift carries `-Delta_i/2 sigma_x - eps0_i/2 sigma_z` plus all
/// coupling terms; controls are one `-sigma_z/2` channel per qubit.
/// Tunable-delta: drift carries only coupling terms; controls are
/// `-sigma_x/2` (box [0, delta_bound]) and `-sigma_z/2` per qubit.
pub fn build_system(
    params: &[QubitParams],
    coupling: &CouplingSpec,
    control_mode: ControlMode,
) -> Result<SystemModel, ModelError> {
    let n = params.len();
    if n == 0 {
        return Err(ModelError::EmptySystem);
    }
    for (i, p) in params.iter().enumerate() {
        if p.delta <= 0.0 {
            return Err(ModelError::BadDelta(i + 1, p.delta));
        }
        if p.epsilon_bound < 0.0 || p.delta_bound < 0.0 {
            return Err(ModelError::BadBound(i + 1));
        }
    }
    let mut seen = std::collections::HashSet::new();
    for &(a, b) in &coupling.edges {
        if a == b {
            return Err(ModelError::SelfLoop(a, b));
        }
        if a == 0 || b == 0 || a > n || b > n {
            return Err(ModelError::EdgeOutOfRange(a, b, n));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(ModelError::DuplicateEdge(a, b));
        }
    }

    let dim = 1usize << n;
    let mut drift = CMatrix::zeros(dim);

    // Coupling terms enter the drift in every mode; J is never a control.
    for &(a, b) in &coupling.edges {
        let zz = pauli_pair(Axis::Z, a, b, n);
        match coupling.kind {
            CouplingKind::Ising => drift.add_scaled(&zz, coupling.strength),
            CouplingKind::Heisenberg => {
                drift.add_scaled(&pauli_pair(Axis::X, a, b, n), coupling.strength);
                drift.add_scaled(&pauli_pair(Axis::Y, a, b, n), coupling.strength);
                drift.add_scaled(&zz, coupling.strength);
            }
        }
    }

    let mut controls = Vec::new();
    for (i, p) in params.iter().enumerate() {
        let q = i + 1;
        let sx = pauli_embed(Axis::X, q, n).expect("index in range");
        let sz = pauli_embed(Axis::Z, q, n).expect("index in range");
        let half = C64::new(-0.5, 0.0);
        match control_mode {
            ControlMode::FixedDelta => {
                drift.add_scaled(&sx, -p.delta / 2.0);
                if p.epsilon0 != 0.0 {
                    drift.add_scaled(&sz, -p.epsilon0 / 2.0);
                }
                controls.push(Control {
                    operator: sz.scale(half),
                    lower: -p.epsilon_bound,
                    upper: p.epsilon_bound,
                    label: format!("eps{q}"),
                });
            }
            ControlMode::TunableDelta => {
                controls.push(Control {
                    operator: sx.scale(half),
                    lower: 0.0,
                    upper: p.delta_bound,
                    label: format!("delta{q}"),
                });
                controls.push(Control {
                    operator: sz.scale(half),
                    lower: -p.epsilon_bound,
                    upper: p.epsilon_bound,
                    label: format!("eps{q}"),
                });
            }
        }
    }

    let min_delta = params.iter().map(|p| p.delta).fold(f64::INFINITY, f64::min);
    let ratio = if coupling.edges.is_empty() {
        0.0
    } else {
        coupling.strength / min_delta
    };
    let mut model = SystemModel::custom(drift, controls, n);
    model.coupling_ratio = ratio;
    if !model.scale_separation_ok() {
        log::warn!(
            "J/min(Delta) = {ratio:.3} violates the J << Delta premise; analytic \
             reference times may not apply"
        );
    }
    Ok(model)
}

/// sigma_axis^(a) sigma_axis^(b) embedded in n qubits.
fn pauli_pair(axis: Axis, a: usize, b: usize, n: usize) -> CMatrix {
    let pa = pauli_embed(axis, a, n).expect("index in range");
    let pb = pauli_embed(axis, b, n).expect("index in range");
    pa.mul_ref(&pb)
}

/// Exact two-qubit resonant Hamiltonian
/// `-(Delta/2)(sigma_x^1 + sigma_x^2) + J sigma_z^1 sigma_z^2`.
///
/// In the rotating-wave regime J << Delta this effects an iSWAP (up to local
/// rotations in the sigma_x eigenbasis) after t = pi/(2J); callers verify
/// that claim numerically rather than assuming it.
pub fn resonant_iswap_drift(delta: f64, j: f64) -> CMatrix {
    if delta != 0.0 && j / delta > 0.1 {
        log::warn!("resonant_iswap_drift: J/Delta = {:.3} > 0.1", j / delta);
    }
    let sx1 = kron(&pauli(Axis::X), &CMatrix::identity(2));
    let sx2 = kron(&CMatrix::identity(2), &pauli(Axis::X));
    let zz = kron(&pauli(Axis::Z), &pauli(Axis::Z));
    let mut h = CMatrix::zeros(4);
    h.add_scaled(&sx1, -delta / 2.0);
    h.add_scaled(&sx2, -delta / 2.0);
    h.add_scaled(&zz, j);
    h
}

/// All-diagonal CZ-generating Hamiltonian
/// `-(eps1/2) sigma_z^1 - (eps2/2) sigma_z^2 + J sigma_z^1 sigma_z^2`.
pub fn cz_drift(eps1: f64, eps2: f64, j: f64) -> CMatrix {
    let sz1 = kron(&pauli(Axis::Z), &CMatrix::identity(2));
    let sz2 = kron(&CMatrix::identity(2), &pauli(Axis::Z));
    let zz = kron(&pauli(Axis::Z), &pauli(Axis::Z));
    let mut h = CMatrix::zeros(4);
    h.add_scaled(&sz1, -eps1 / 2.0);
    h.add_scaled(&sz2, -eps2 / 2.0);
    h.add_scaled(&zz, j);
    h
}

/// Two-qubit fixed-delta defaults from the reference calculations:
/// Delta_2/Delta_1 = 0.9 and J/Delta_1 = 0.01.
pub fn two_qubit_defaults() -> Vec<QubitParams> {
    vec![QubitParams::with_delta(1.0), QubitParams::with_delta(0.9)]
}

/// Three-qubit defaults: Delta ratios 1.0, 0.9, 0.82 with J/Delta_1 = 0.01.
pub fn three_qubit_defaults() -> Vec<QubitParams> {
    vec![
        QubitParams::with_delta(1.0),
        QubitParams::with_delta(0.9),
        QubitParams::with_delta(0.82),
    ]
}

pub const DEFAULT_J: f64 = 0.01;
