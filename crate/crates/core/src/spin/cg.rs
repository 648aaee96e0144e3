use serde::{Deserialize, Serialize};

use super::{HalfInt, SpinError};

/// Coupling `|j1 j2; J M⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingLabel {
    pub j1: HalfInt,
    pub j2: HalfInt,
    pub j: HalfInt,
    pub m: HalfInt,
}

impl CouplingLabel {
    pub fn new(j1: HalfInt, j2: HalfInt, j: HalfInt, m: HalfInt) -> Self {
        Self { j1, j2, j, m }
    }

    /// Triangle condition plus the parity of `j1 + j2 + J`.
    pub fn satisfies_triangle(&self) -> bool {
        let (j1, j2, j) = (self.j1.twice(), self.j2.twice(), self.j.twice());
        j1 >= 0 && j2 >= 0 && (j1 - j2).abs() <= j && j <= j1 + j2 && (j1 + j2 + j) % 2 == 0
    }
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<(), SpinError> {
    if m.twice().abs() > j.twice() || j.integer_diff(m).is_none() {
        return Err(SpinError::MagneticNumber { j, m });
    }
    Ok(())
}

fn factorial(n: i32) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Clebsch-Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩` in the Condon-Shortley
/// phase convention, via Racah's closed-form sum.
///
/// Returns 0 when `m1 + m2 ≠ M`.
pub fn cg_coefficient(label: CouplingLabel, m1: HalfInt, m2: HalfInt) -> Result<f64, SpinError> {
    let CouplingLabel { j1, j2, j, m } = label;
    if !label.satisfies_triangle() {
        return Err(SpinError::Triangle { j1, j2, j });
    }
    check_projection(j1, m1)?;
    check_projection(j2, m2)?;
    check_projection(j, m)?;
    if m1 + m2 != m {
        return Ok(0.0);
    }

    // every combination below is a whole number once the checks above pass
    let int = |x: HalfInt| {
        debug_assert!(x.is_integer());
        x.twice() / 2
    };
    let a = int(j1 + j2 - j);
    let b = int(j1 - m1);
    let c = int(j2 + m2);
    let d = int(j - j2 + m1);
    let e = int(j - j1 - m2);

    let prefactor = ((j.twice() + 1) as f64 * factorial(int(j + j1 - j2)) * factorial(int(j - j1 + j2))
        * factorial(a)
        / factorial(int(j1 + j2 + j) + 1))
    .sqrt()
        * (factorial(int(j + m))
            * factorial(int(j - m))
            * factorial(int(j1 - m1))
            * factorial(int(j1 + m1))
            * factorial(int(j2 - m2))
            * factorial(int(j2 + m2)))
        .sqrt();

    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign
            / (factorial(k)
                * factorial(a - k)
                * factorial(b - k)
                * factorial(c - k)
                * factorial(d + k)
                * factorial(e + k));
    }
    Ok(prefactor * sum)
}
