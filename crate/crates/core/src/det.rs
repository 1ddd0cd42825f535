//! Determinants of small dense matrices.
//!
//! Matrices up to 4×4 use Laplace (cofactor) expansion, which is
//! bit-reproducible; larger ones use LU factorization with partial pivoting.

/// Largest size handled by cofactor expansion in [`det`].
pub const COFACTOR_MAX: usize = 4;

/// Determinant of the row-major `n × n` matrix `m`.
pub fn det(m: &[f64], n: usize) -> f64 {
    assert_eq!(m.len(), n * n, "matrix storage does not match size");
    if n <= COFACTOR_MAX {
        det_cofactor(m, n)
    } else {
        det_lu(m, n)
    }
}

/// Laplace expansion along the first row.
pub fn det_cofactor(m: &[f64], n: usize) -> f64 {
    assert_eq!(m.len(), n * n);
    match n {
        0 => 1.0,
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => {
            let mut minor = vec![0.0; (n - 1) * (n - 1)];
            let mut acc = 0.0;
            for col in 0..n {
                let a = m[col];
                if a == 0.0 {
                    continue;
                }
                for r in 1..n {
                    let mut k = 0;
                    for c in (0..n).filter(|&c| c != col) {
                        minor[(r - 1) * (n - 1) + k] = m[r * n + c];
                        k += 1;
                    }
                }
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * a * det_cofactor(&minor, n - 1);
            }
            acc
        }
    }
}

/// LU factorization with partial pivoting.
pub fn det_lu(m: &[f64], n: usize) -> f64 {
    assert_eq!(m.len(), n * n);
    let mut a = m.to_vec();
    let mut sign = 1.0;
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|r| (r, a[r * n + k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax == 0.0 {
            return 0.0;
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for r in k + 1..n {
            let f = a[r * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            for c in k..n {
                a[r * n + c] -= f * a[k * n + c];
            }
        }
    }
    (0..n).fold(sign, |acc, k| acc * a[k * n + k])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(det(&[2.0, 0.0, 0.0, 2.0], 2), 4.0);
        assert_eq!(det(&[0.0, 1.0, 1.0, 0.0], 2), -1.0);
        assert_eq!(det(&[1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0], 3), 1.0);
        assert_eq!(det_lu(&[0.0, 1.0, 1.0, 0.0], 2), -1.0);
        let id5: Vec<f64> = (0..25).map(|i| if i % 6 == 0 { 1.0 } else { 0.0 }).collect();
        assert_eq!(det(&id5, 5), 1.0);
    }

    #[test]
    fn singular_matrix_lu() {
        let m = [1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 1.0, 0.0, 1.0];
        assert_eq!(det_lu(&m, 3), 0.0);
    }

    proptest! {
        #[test]
        fn cofactor_and_lu_agree(n in 1usize..=5, seed in proptest::collection::vec(-2.0f64..2.0, 25)) {
            let m = &seed[..n * n];
            let a = det_cofactor(m, n);
            let b = det_lu(m, n);
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
        }

        #[test]
        fn row_swap_flips_sign(n in 2usize..=5, seed in proptest::collection::vec(-2.0f64..2.0, 25), r in 0usize..5, s in 0usize..5) {
            let (r, s) = (r % n, s % n);
            prop_assume!(r != s);
            let m = seed[..n * n].to_vec();
            let mut w = m.clone();
            for c in 0..n { w.swap(r * n + c, s * n + c); }
            let a = det(&m, n);
            let b = det(&w, n);
            prop_assert!((a + b).abs() <= 1e-10 * (1.0 + a.abs()));
        }

        #[test]
        fn linear_in_a_row(n in 1usize..=4, seed in proptest::collection::vec(-2.0f64..2.0, 16), k in -3.0f64..3.0) {
            let m = seed[..n * n].to_vec();
            let mut w = m.clone();
            for c in 0..n { w[c] *= k; }
            prop_assert!((det(&w, n) - k * det(&m, n)).abs() <= 1e-10 * (1.0 + det(&m, n).abs() * k.abs()));
        }
    }
}
