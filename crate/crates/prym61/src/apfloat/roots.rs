use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::complex::BigComplex;
use super::real::BigFloat;

/// All complex roots of a squarefree integer polynomial, to the requested
/// precision. Durand-Kerner at f64 for starting values, then Newton polishing
/// at successively doubled precision. Roots are sorted lexicographically by
/// (re, im) so the ordering is reproducible.
pub fn complex_roots(poly: &[BigInt], digits: u32) -> Vec<BigComplex> {
    let deg = poly.len() - 1;
    assert!(deg >= 1, "constant polynomial has no roots");
    let coeffs_f64: Vec<f64> = poly.iter().map(|c| c.to_f64().expect("coefficient fits f64")).collect();

    // Durand-Kerner in f64
    let mut zs: Vec<(f64, f64)> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.4;
            (1.3 * angle.cos(), 1.3 * angle.sin())
        })
        .collect();
    let lead = coeffs_f64[deg];
    for _ in 0..200 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let (x, y) = zs[i];
            let (mut px, mut py) = (coeffs_f64[deg] / lead, 0.0);
            for k in (0..deg).rev() {
                let nx = px * x - py * y + coeffs_f64[k] / lead;
                let ny = px * y + py * x;
                px = nx;
                py = ny;
            }
            let (mut dx, mut dy) = (1.0, 0.0);
            for (j, &(u, v)) in zs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let (ax, ay) = (x - u, y - v);
                let nx = dx * ax - dy * ay;
                let ny = dx * ay + dy * ax;
                dx = nx;
                dy = ny;
            }
            let denom = dx * dx + dy * dy;
            if denom < 1e-300 {
                continue;
            }
            let cx = (px * dx + py * dy) / denom;
            let cy = (py * dx - px * dy) / denom;
            zs[i] = (x - cx, y - cy);
            delta += cx.abs() + cy.abs();
        }
        if delta < 1e-13 {
            break;
        }
    }

    // Newton polish at doubling precision
    let mut prec = 30u32;
    let mut roots: Vec<BigComplex> = zs
        .iter()
        .map(|&(x, y)| {
            BigComplex::new(f64_to_bigfloat(x, prec), f64_to_bigfloat(y, prec))
        })
        .collect();
    while prec < digits {
        let next = (prec * 2).min(digits.max(30));
        let coeffs: Vec<BigComplex> =
            poly.iter().map(|c| BigComplex::from_real(BigFloat::from_bigint(c, next))).collect();
        roots = roots
            .into_iter()
            .map(|z| {
                let mut z = z.with_digits(next);
                for _ in 0..(next.ilog2() + 4) {
                    let (p, dp) = eval_with_derivative(&coeffs, &z);
                    if p.is_zero() {
                        break;
                    }
                    z = &z - &(&p / &dp);
                }
                z
            })
            .collect();
        if next == digits {
            break;
        }
        prec = next;
    }
    // final polish at target precision
    let coeffs: Vec<BigComplex> =
        poly.iter().map(|c| BigComplex::from_real(BigFloat::from_bigint(c, digits))).collect();
    for z in roots.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = eval_with_derivative(&coeffs, z);
            if p.is_zero() {
                break;
            }
            *z = &*z - &(&p / &dp);
        }
    }
    roots.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
    roots
}

fn eval_with_derivative(coeffs: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let digits = z.digits();
    let mut p = BigComplex::zero(digits);
    let mut dp = BigComplex::zero(digits);
    for c in coeffs.iter().rev() {
        dp = &(&dp * z) + &p;
        p = &(&p * z) + c;
    }
    (p, dp)
}

fn f64_to_bigfloat(x: f64, digits: u32) -> BigFloat {
    // exact dyadic conversion through the bit pattern
    let r = num_rational::BigRational::from_float(x).unwrap_or_else(num_rational::BigRational::default);
    BigFloat::from_rational(&r, digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_roots_satisfy_polynomial() {
        // x^4 + 8x^2 + 13: all roots purely imaginary
        let poly: Vec<BigInt> =
            [13, 0, 8, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        let d = 120;
        let roots = complex_roots(&poly, d);
        assert_eq!(roots.len(), 4);
        let coeffs: Vec<BigComplex> =
            poly.iter().map(|c| BigComplex::from_real(BigFloat::from_bigint(c, d))).collect();
        for r in &roots {
            let (p, _) = eval_with_derivative(&coeffs, r);
            assert!(p.abs() < BigFloat::pow10(-(d as i64) + 10, d), "residual {:?}", p);
            assert!(r.re.abs() < BigFloat::pow10(-100, d), "roots are imaginary");
        }
        // conjugate-closed: imaginary parts come in +- pairs
        let sum = roots.iter().fold(BigFloat::zero(d), |acc, r| &acc + &r.im);
        assert!(sum.abs() < BigFloat::pow10(-100, d));
    }

    #[test]
    fn real_quadratic_roots() {
        // x^2 - x - 15 has roots (1 +- sqrt(61))/2
        let poly: Vec<BigInt> = [-15, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let roots = complex_roots(&poly, 100);
        assert_eq!(roots.len(), 2);
        let d = 100;
        let s61 = BigFloat::from_i64(61, d).sqrt().unwrap();
        let nu = (&BigFloat::one(d) + &s61).div_i64(2);
        assert!((&roots[1].re - &nu).abs() < BigFloat::pow10(-90, d));
    }
}
