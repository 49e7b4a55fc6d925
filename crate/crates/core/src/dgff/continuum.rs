use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_g(g: f64) -> Result<()> {
    if g > 0.0 && g.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "coupling g = {g} must be positive"
        )))
    }
}

fn distance(z: Complex64, w: Complex64) -> Result<f64> {
    let d = (z - w).norm();
    if d == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(d)
}

/// `⟨O_e(z) O_{−e}(w)⟩ = |z − w|^{−e²/g}`.
pub fn electric_two_point(z: Complex64, w: Complex64, e: f64, g: f64) -> Result<f64> {
    check_g(g)?;
    Ok(distance(z, w)?.powf(-e * e / g))
}

/// `|z − w|^{−m² g}`.
pub fn magnetic_two_point(z: Complex64, w: Complex64, m: f64, g: f64) -> Result<f64> {
    check_g(g)?;
    Ok(distance(z, w)?.powf(-m * m * g))
}

/// Electric charges `±e` at `z1, z2` and magnetic charges `±m` at `w1, w2`.
pub fn mixed_four_point(
    z1: Complex64,
    z2: Complex64,
    w1: Complex64,
    w2: Complex64,
    e: f64,
    m: f64,
    g: f64,
) -> Result<Complex64> {
    check_g(g)?;
    let pts = [z1, z2, w1, w2];
    for i in 0..4 {
        for j in i + 1..4 {
            distance(pts[i], pts[j])?;
        }
    }
    let modulus = distance(z1, z2)?.powf(-e * e / g) * distance(w1, w2)?.powf(-m * m * g);
    let winding = (z2 - w2).arg() - (z2 - w1).arg() - (z1 - w2).arg() + (z1 - w1).arg();
    Ok(Complex64::from_polar(modulus, m * e * winding))
}

/// Limit of the four-point function as `z_j = w_j + δ u_j`, `δ → 0`.
pub fn spinor_two_point(
    w1: Complex64,
    w2: Complex64,
    u1: Complex64,
    u2: Complex64,
    e: f64,
    m: f64,
    g: f64,
) -> Result<Complex64> {
    check_g(g)?;
    if u1.norm() == 0.0 || u2.norm() == 0.0 {
        return Err(Error::DomainError(
            "direction vectors must be nonzero".into(),
        ));
    }
    let r = distance(w1, w2)?;
    let modulus = r.powf(-e * e / g - m * m * g);
    let phase = u1.arg() + u2.arg() - (w2 - w1).arg() - (w1 - w2).arg();
    Ok(Complex64::from_polar(modulus, m * e * phase))
}

/// The closed form `e^{−2iem arg(w2−w1)} e^{iem(arg u1 + arg u2)} |w2−w1|^{−e²/g−m²g}`.
/// It differs from [`spinor_two_point`] by the branch factor `e^{∓iπem}`.
pub fn spinor_two_point_closed_form(
    w1: Complex64,
    w2: Complex64,
    u1: Complex64,
    u2: Complex64,
    e: f64,
    m: f64,
    g: f64,
) -> Result<Complex64> {
    check_g(g)?;
    let r = distance(w1, w2)?;
    let modulus = r.powf(-e * e / g - m * m * g);
    let phase = -2.0 * (w2 - w1).arg() + u1.arg() + u2.arg();
    Ok(Complex64::from_polar(modulus, m * e * phase))
}

/// Scaling exponent `e²/g + m²g` of the electric-magnetic operator.
pub fn scaling_exponent(e: f64, m: f64, g: f64) -> f64 {
    e * e / g + m * m * g
}

/// Compares the exponent of `(e, m)` at coupling `g` with that of
/// `(2m, e/2)` at coupling `4/g`; returns both.
pub fn coupling_swap_check(e: f64, m: f64, g: f64) -> Result<(f64, f64)> {
    check_g(g)?;
    Ok((
        scaling_exponent(e, m, g),
        scaling_exponent(2.0 * m, e / 2.0, 4.0 / g),
    ))
}
