//! Target gates and analytic single-qubit pulse constructions.
//!
//! Gate matrices use the computational basis with qubit 1 as the leftmost
//! tensor factor; for controlled gates qubit 1 (and 2, for Toffoli) is the
//! control. `fidelity_local_z_corrected` scores a candidate unitary against a
//! target up to per-qubit z-phase gates, which is the equivalence the
//! analytic two-qubit schedules produce ("a gate, in addition to two
//! single-qubit rotations"); `conjugate_to_x_basis` supplies the basis flip
//! needed when those residual rotations are about x instead of z.

use crate::linalg::{kron, pauli, Axis, CMatrix, C64};
use crate::pulse::{ControlPulse, PulseError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TargetsError {
    #[error("dimension mismatch: candidate {0}, target {1}")]
    DimMismatch(usize, usize),
    #[error("theta = 0 gives a degenerate rotation axis; use a plain z pulse instead")]
    DegenerateAxis,
    #[error("middle-step sigma_z amplitude {need:.3} exceeds eps_bound {bound:.3}")]
    MiddleAmplitudeOutOfRange { need: f64, bound: f64 },
    #[error(transparent)]
    Pulse(#[from] PulseError),
}

/// Named gates from the standard two-qubit set plus the Toffoli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateName {
    Cnot,
    Cz,
    ISwap,
    SqrtSwap,
    Toffoli,
}

impl GateName {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cnot" => Some(Self::Cnot),
            "cz" => Some(Self::Cz),
            "iswap" => Some(Self::ISwap),
            "sqrt_swap" | "sqrtswap" | "sqrt-swap" => Some(Self::SqrtSwap),
            "toffoli" => Some(Self::Toffoli),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Cnot => "CNOT",
            Self::Cz => "CZ",
            Self::ISwap => "iSWAP",
            Self::SqrtSwap => "sqrtSWAP",
            Self::Toffoli => "TOFFOLI",
        }
    }
}

/// A unitary gate with its label and qubit count.
#[derive(Debug, Clone)]
pub struct TargetGate {
    pub label: String,
    pub matrix: CMatrix,
    pub n: usize,
}

impl TargetGate {
    pub fn new(label: impl Into<String>, matrix: CMatrix, n: usize) -> Self {
        debug_assert!(matrix.is_unitary(1e-12), "target gate must be unitary");
        Self {
            label: label.into(),
            matrix,
            n,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// {label, n, matrix: [[[re, im], ..], ..]} for cross-checking.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.label,
            "n": self.n,
            "matrix": self.matrix.to_json_value(),
        })
    }
}

/// The exact matrices of the standard gate set.
pub fn standard_gate(name: GateName) -> TargetGate {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match name {
        GateName::Cnot => TargetGate::new(
            "CNOT",
            CMatrix::from_rows(
                4,
                &[l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o],
            ),
            2,
        ),
        GateName::Cz => TargetGate::new("CZ", CMatrix::diagonal(&[l, l, l, -l]), 2),
        GateName::ISwap => TargetGate::new(
            "iSWAP",
            CMatrix::from_rows(
                4,
                &[l, o, o, o, o, o, i, o, o, i, o, o, o, o, o, l],
            ),
            2,
        ),
        GateName::SqrtSwap => {
            let p = C64::new(0.5, 0.5);
            let m = C64::new(0.5, -0.5);
            TargetGate::new(
                "sqrtSWAP",
                CMatrix::from_rows(4, &[l, o, o, o, o, p, m, o, o, m, p, o, o, o, o, l]),
                2,
            )
        }
        GateName::Toffoli => toffoli_with_target(3),
    }
}

/// Toffoli with the NOT applied to `target` (1..=3); the other two qubits
/// are the controls. `standard_gate(Toffoli)` is the target = 3 convention.
pub fn toffoli_with_target(target: usize) -> TargetGate {
    assert!((1..=3).contains(&target), "target qubit must be 1..=3");
    let mut m = CMatrix::identity(8);
    // Swap the two basis states where both controls are 1 and the target bit
    // differs (qubit 1 = most significant bit).
    let bit = 3 - target; // bit position of the target qubit
    let controls_mask = 0b111 ^ (1 << bit);
    let a = controls_mask; // target bit 0
    let b = controls_mask | (1 << bit); // target bit 1
    m[(a, a)] = C64::new(0.0, 0.0);
    m[(b, b)] = C64::new(0.0, 0.0);
    m[(a, b)] = C64::new(1.0, 0.0);
    m[(b, a)] = C64::new(1.0, 0.0);
    TargetGate::new(format!("TOFFOLI(t{target})"), m, 3)
}

/// Axis-angle rotation: angle `beta` about the axis at polar angle `theta`
/// from z and azimuth `phi` from the xz plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub beta: f64,
    pub theta: f64,
    pub phi: f64,
}

/// exp(-i (beta/2) n.sigma) with n = (sin t cos p, sin t sin p, cos t).
pub fn rotation_unitary(spec: &RotationSpec) -> CMatrix {
    let (nx, ny, nz) = (
        spec.theta.sin() * spec.phi.cos(),
        spec.theta.sin() * spec.phi.sin(),
        spec.theta.cos(),
    );
    let c = (spec.beta / 2.0).cos();
    let s = (spec.beta / 2.0).sin();
    let mut u = CMatrix::identity(2).scale(C64::new(c, 0.0));
    let mi = C64::new(0.0, -s);
    u.add_scaled(&pauli(Axis::X).scale(mi), nx);
    u.add_scaled(&pauli(Axis::Y).scale(mi), ny);
    u.add_scaled(&pauli(Axis::Z).scale(mi), nz);
    u
}

/// Three-step pulse implementing `rotation_unitary(spec)` on one qubit with
/// gap `delta`, using fast z segments at amplitude `eps_bound`.
///
/// Channel order matches the tunable-delta model: column 0 drives
/// `-sigma_x/2`, column 1 drives `-sigma_z/2`. Segments:
/// z-rotation by -phi, then the xz-plane Hamiltonian
/// `delta (sigma_x + sigma_z cot(theta)) / 2` for exactly
/// `beta sin(theta) / delta` (realized as channel amplitudes
/// (-delta, -delta cot(theta))), then z-rotation by +phi. The gap stays on
/// during the z segments, which is what limits their fidelity to the
/// (delta/eps_bound)^2 scale.
pub fn single_qubit_recipe(
    spec: &RotationSpec,
    delta: f64,
    eps_bound: f64,
) -> Result<ControlPulse, TargetsError> {
    assert!(delta > 0.0 && eps_bound > 0.0);
    if spec.theta.sin().abs() < 1e-12 {
        return Err(TargetsError::DegenerateAxis);
    }
    let cot = spec.theta.cos() / spec.theta.sin();
    let mid_eps = delta * cot;
    if mid_eps.abs() > eps_bound {
        return Err(TargetsError::MiddleAmplitudeOutOfRange {
            need: mid_eps.abs(),
            bound: eps_bound,
        });
    }
    // z steps: H = -(eps/2) sigma_z - (delta/2) sigma_x rotates by
    // -Omega*t about the tilted axis; pick t so the angle magnitude is
    // exactly |phi| and the sign from the eps sign.
    let omega = (eps_bound * eps_bound + delta * delta).sqrt();
    let z_dur = spec.phi.abs() / omega;
    let sgn = if spec.phi >= 0.0 { 1.0 } else { -1.0 };
    let mid_dur = spec.beta * spec.theta.sin() / delta;

    let segments = [
        (vec![delta, sgn * eps_bound], z_dur),
        (vec![-delta, -mid_eps], mid_dur),
        (vec![delta, -sgn * eps_bound], z_dur),
    ];
    Ok(ControlPulse::from_segments(&segments, 2)?)
}

/// Plain trace fidelity |Tr(T^dag U)|^2 / d^2 (internal; the public
/// definition lives in the optimizer module).
fn plain_fidelity(target: &CMatrix, u: &CMatrix) -> f64 {
    let z = target.dagger().trace_of_product(u);
    let d = target.dim() as f64;
    z.norm_sqr() / (d * d)
}

/// Hadamard-conjugate every qubit: maps sigma_x <-> sigma_z, so residual
/// x-axis rotations become z phases that `fidelity_local_z_corrected` can
/// absorb.
pub fn conjugate_to_x_basis(u: &CMatrix) -> CMatrix {
    let n = u.dim().trailing_zeros() as usize;
    debug_assert_eq!(1 << n, u.dim(), "dimension must be a power of two");
    let h1 = {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_real(2, &[s, s, s, -s])
    };
    let mut w = CMatrix::identity(1);
    for _ in 0..n {
        w = kron(&w, &h1);
    }
    w.mul_ref(u).mul_ref(&w)
}

/// Maximize |Tr(T^dag Z(phases) U)|^2 / d^2 over per-qubit z phases
/// Z = diag(1, e^{i phi_q}) on each qubit (global phase is already
/// absorbed by the modulus). Returns the fidelity and the maximizing phases.
///
/// Coordinate ascent with the analytic per-phase optimum, restarted from a
/// coarse phase grid; converges to 1e-10 in fidelity.
pub fn fidelity_local_z_corrected(
    u: &CMatrix,
    target: &TargetGate,
) -> Result<(f64, Vec<f64>), TargetsError> {
    let d = target.dim();
    if u.dim() != d {
        return Err(TargetsError::DimMismatch(u.dim(), d));
    }
    let n = target.n;
    // w[s] = (U T^dag)_{ss}; Tr(T^dag Z U) = sum_s Z_ss w_s.
    let ut = u.mul_ref(&target.matrix.dagger());
    let w: Vec<C64> = (0..d).map(|s| ut[(s, s)]).collect();

    let trace_for = |phases: &[f64]| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (s, &ws) in w.iter().enumerate() {
            let mut phase = 0.0;
            for (q, &p) in phases.iter().enumerate() {
                if (s >> (n - 1 - q)) & 1 == 1 {
                    phase += p;
                }
            }
            acc += C64::from_polar(1.0, phase) * ws;
        }
        acc
    };

    let ascend = |start: &[f64]| -> (f64, Vec<f64>) {
        let mut phases = start.to_vec();
        let mut best = trace_for(&phases).norm();
        for _ in 0..200 {
            for q in 0..n {
                // Split the trace by the bit of qubit q.
                let mut a = C64::new(0.0, 0.0);
                let mut b = C64::new(0.0, 0.0);
                for (s, &ws) in w.iter().enumerate() {
                    let mut phase = 0.0;
                    for (p, &ph) in phases.iter().enumerate() {
                        if p != q && (s >> (n - 1 - p)) & 1 == 1 {
                            phase += ph;
                        }
                    }
                    let term = C64::from_polar(1.0, phase) * ws;
                    if (s >> (n - 1 - q)) & 1 == 1 {
                        b += term;
                    } else {
                        a += term;
                    }
                }
                if b.norm() > 1e-300 && a.norm() > 1e-300 {
                    phases[q] = (a.arg() - b.arg()).rem_euclid(2.0 * std::f64::consts::PI);
                }
            }
            let now = trace_for(&phases).norm();
            if now - best <= 1e-12 * best.max(1.0) {
                best = best.max(now);
                break;
            }
            best = now;
        }
        (best, phases)
    };

    // Coarse grid of starts keeps the ascent out of local maxima; n <= 3 so
    // 4^n starts are cheap.
    let grid = [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 1.5 * std::f64::consts::PI];
    let mut best_trace = -1.0;
    let mut best_phases = vec![0.0; n];
    let starts = 4usize.pow(n as u32);
    for idx in 0..starts {
        let mut start = vec![0.0; n];
        let mut rem = idx;
        for p in start.iter_mut() {
            *p = grid[rem % 4];
            rem /= 4;
        }
        let (tr, phases) = ascend(&start);
        if tr > best_trace {
            best_trace = tr;
            best_phases = phases;
        }
    }
    // Normalize phases to (-pi, pi].
    for p in best_phases.iter_mut() {
        let mut x = p.rem_euclid(2.0 * std::f64::consts::PI);
        if x > std::f64::consts::PI {
            x -= 2.0 * std::f64::consts::PI;
        }
        *p = x;
    }
    let df = d as f64;
    Ok((best_trace * best_trace / (df * df), best_phases))
}
