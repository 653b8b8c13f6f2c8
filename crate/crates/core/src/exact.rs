//! Exact orientation signs for floating-point input.

use num_bigint::BigInt;
use num_traits::{Float, Signed, Zero};

/// Sign of `det [p_i | 1]` for `d + 1` points `p_i` in `R^d`.
///
/// Every finite `f64` is an integer multiple of `2^e_min` for the smallest
/// exponent present, so scaling the whole matrix by `2^{-e_min}` gives an
/// integer matrix with the same determinant sign. Bareiss elimination keeps
/// every intermediate integral.
pub(crate) fn orientation_sign(points: &[&[f64]]) -> i32 {
    let d = points.len() - 1;
    assert!(points.iter().all(|p| p.len() == d), "need d + 1 points in R^d");
    let decoded: Vec<Vec<(u64, i16, i8)>> = points
        .iter()
        .map(|p| p.iter().map(|x| x.integer_decode()).collect())
        .collect();
    let e_min = decoded
        .iter()
        .flatten()
        .filter(|(m, _, _)| *m != 0)
        .map(|&(_, e, _)| e)
        .chain(std::iter::once(0))
        .min()
        .unwrap();
    let lift = |(m, e, s): (u64, i16, i8)| -> BigInt {
        let v = BigInt::from(m) << ((e - e_min) as usize);
        if s < 0 {
            -v
        } else {
            v
        }
    };
    let one = BigInt::from(1u8) << ((-e_min) as usize);
    let mut a: Vec<Vec<BigInt>> = decoded
        .into_iter()
        .map(|row| {
            let mut r: Vec<BigInt> = row.into_iter().map(lift).collect();
            r.push(one.clone());
            r
        })
        .collect();
    bareiss_sign(&mut a)
}

fn bareiss_sign(a: &mut [Vec<BigInt>]) -> i32 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = BigInt::from(1u8);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let last = &a[n - 1][n - 1];
    if last.is_zero() {
        0
    } else if last.is_negative() {
        -sign
    } else {
        sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_orientation() {
        let (a, b, c) = ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
        assert_eq!(orientation_sign(&[&a, &b, &c]), 1);
        assert_eq!(orientation_sign(&[&b, &a, &c]), -1);
        let d = [2.0, 0.0];
        assert_eq!(orientation_sign(&[&a, &b, &d]), 0);
    }

    #[test]
    fn detects_tiny_offsets() {
        // collinear up to one ulp; floating-point evaluation would round to zero
        let a = [0.1, 0.1];
        let b = [0.3, 0.3];
        let c = [0.7, f64::from_bits(0.7f64.to_bits() + 1)];
        assert_eq!(orientation_sign(&[&a, &b, &c]), 1);
        let c = [0.7, 0.7];
        assert_eq!(orientation_sign(&[&a, &b, &c]), 0);
    }

    #[test]
    fn three_dimensional() {
        let o = [0.0, 0.0, 0.0];
        let x = [1.0, 0.0, 0.0];
        let y = [0.0, 1.0, 0.0];
        let z = [0.0, 0.0, 1.0];
        let s = orientation_sign(&[&o, &x, &y, &z]);
        assert_eq!(orientation_sign(&[&x, &o, &y, &z]), -s);
        assert_ne!(s, 0);
    }
}
