//! Source (qubit) and target (qudit) circuit representations.

mod embedding;
mod qubit;
mod qudit;
mod report;
pub mod text;

pub use embedding::{EmbeddingMap, Slot};
pub use qubit::{QubitCircuit, QubitGate};
pub use qudit::{Lowered, QuditCircuit, QuditGate};
pub use report::CompilationReport;

use std::f64::consts::TAU;

/// Wraps an angle into `[0, 2pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid of a tiny negative number rounds up to exactly TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normalize_angle_range() {
        assert_eq!(normalize_angle(0.0), 0.0);
        assert_eq!(normalize_angle(PI), PI);
        assert!((normalize_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert_eq!(normalize_angle(-1e-300), 0.0);
        assert!((normalize_angle(5.0 * PI) - PI).abs() < 1e-12);
    }
}
