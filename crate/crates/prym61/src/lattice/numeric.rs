use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::intmat::IMat;
use super::lll::lll_reduce;
use crate::apfloat::BigFloat;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("kernel dimension unstable under scale increase ({0} vs {1}); raise the precision")]
    Unstable(usize, usize),
}

/// Z-basis of the common approximate kernel of real linear forms on Z^n.
///
/// `forms[i]` holds the coefficients of the i-th form at full precision. The
/// embedding `v -> (v, C * l_1(v), ..., C * l_m(v))` is LLL-reduced with the
/// scale raised in rungs up to `C = 10^scale_digits`; vectors whose exact
/// re-evaluation stays below `tol` in every form are kept. The result is
/// validated by one more rung at ten times the scale: a changed dimension
/// reports instability.
pub fn integer_kernel_numeric(
    forms: &[Vec<BigFloat>],
    n: usize,
    scale_digits: u32,
    tol: &BigFloat,
) -> Result<IMat, KernelError> {
    assert!(forms.iter().all(|f| f.len() == n), "form arity mismatch");
    let dim_at = |c_digits: u32| -> IMat { kernel_pass(forms, n, c_digits, tol) };
    let base = dim_at(scale_digits);
    let check = dim_at(scale_digits + 1);
    if base.len() != check.len() {
        return Err(KernelError::Unstable(base.len(), check.len()));
    }
    Ok(base)
}

fn kernel_pass(forms: &[Vec<BigFloat>], n: usize, scale_digits: u32, tol: &BigFloat) -> IMat {
    // progressive rungs keep the LLL entries small
    let rung = 48u32;
    let mut basis: IMat = super::intmat::mat_identity(n);
    let mut applied = 0u32;
    while applied < scale_digits {
        let next = (applied + rung).min(scale_digits);
        basis = reduce_at_scale(forms, &basis, next, tol);
        applied = next;
    }
    // final selection by exact evaluation against tol
    let mut out: IMat = basis
        .into_iter()
        .filter(|v| {
            forms.iter().all(|f| {
                let val = eval_form(f, v);
                val.abs() < *tol
            })
        })
        .collect();
    out = super::intmat::hnf_rows(&out);
    out
}

fn reduce_at_scale(forms: &[Vec<BigFloat>], basis: &IMat, c_digits: u32, tol: &BigFloat) -> IMat {
    let n = basis[0].len();
    let m = forms.len();
    let digits = forms[0][0].digits();
    let scale = BigFloat::pow10(c_digits as i64, digits);
    let mut rows: IMat = Vec::with_capacity(basis.len());
    for v in basis {
        let mut row = Vec::with_capacity(n + m);
        row.extend(v.iter().cloned());
        for f in forms {
            let val = &eval_form(f, v) * &scale;
            row.push(round_to_bigint(&val));
        }
        rows.push(row);
    }
    let red = lll_reduce(&rows);
    // keep candidates whose scaled part is negligible relative to C * tol,
    // i.e. plausibly in the kernel at this rung; always retain a full basis
    let mut kernels: IMat = Vec::new();
    let mut rest: IMat = Vec::new();
    let threshold = round_to_bigint(&(&(&scale * tol) * &BigFloat::from_i64(4, digits)));
    for r in red {
        let head: Vec<BigInt> = r[..n].to_vec();
        let tail_small = r[n..].iter().all(|x| x.magnitude() <= threshold.magnitude());
        if tail_small {
            kernels.push(head);
        } else {
            rest.push(head);
        }
    }
    kernels.extend(rest);
    kernels
}

fn eval_form(f: &[BigFloat], v: &[BigInt]) -> BigFloat {
    let digits = f[0].digits();
    let mut acc = BigFloat::zero(digits);
    for (c, x) in f.iter().zip(v) {
        if x.is_zero() {
            continue;
        }
        let xi = i64::try_from(x).ok();
        match xi {
            Some(k) => acc = &acc + &c.mul_i64(k),
            None => acc = &acc + &(c * &BigFloat::from_bigint(x, digits)),
        }
    }
    acc
}

fn round_to_bigint(x: &BigFloat) -> BigInt {
    x.round_bigint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_projections_have_zero_kernel() {
        let d = 120;
        let forms: Vec<Vec<BigFloat>> = (0..3)
            .map(|i| (0..3).map(|j| BigFloat::from_i64(i64::from(i == j), d)).collect())
            .collect();
        let tol = BigFloat::pow10(-40, d);
        let k = integer_kernel_numeric(&forms, 3, 60, &tol).unwrap();
        assert!(k.is_empty());
    }

    #[test]
    fn difference_form_kernel() {
        let d = 120;
        // single form x1 - x2 on Z^2
        let forms = vec![vec![BigFloat::one(d), BigFloat::from_i64(-1, d)]];
        let tol = BigFloat::pow10(-40, d);
        let k = integer_kernel_numeric(&forms, 2, 60, &tol).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], k[0][1]);
        assert_eq!(k[0][0].magnitude().clone(), BigInt::from(1u32).magnitude().clone());
    }

    #[test]
    fn irrational_relation_detected() {
        // l(x) = x0 + sqrt2 x1 - (1 + sqrt2) x2 has kernel (1,1,1) and nothing else
        let d = 150;
        let s2 = BigFloat::from_i64(2, d).sqrt().unwrap();
        let one = BigFloat::one(d);
        let c2 = -(&one + &s2);
        let forms = vec![vec![one.clone(), s2, c2]];
        let tol = BigFloat::pow10(-60, d);
        let k = integer_kernel_numeric(&forms, 3, 100, &tol).unwrap();
        assert_eq!(k.len(), 1, "kernel {:?}", k);
        assert_eq!(k[0], vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]);
    }
}
