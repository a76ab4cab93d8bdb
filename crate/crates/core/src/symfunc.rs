//! Complete homogeneous and elementary symmetric polynomials, rectangular
//! Schur polynomials, and the map `z[i,j] ↦ h_{i−j}(x_1..x_j)`.

use crate::error::Result;
use crate::ideal::MinorSpec;
use crate::poly::{det, x, MultiPoly, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymKind {
    H,
    E,
}

/// `h_k` or `e_k` in the given variables.
pub fn symmetric(kind: SymKind, k: usize, vars: &[Var]) -> MultiPoly {
    // row[j] = f_j(vars[..i]) built one variable at a time.
    let mut row = vec![MultiPoly::zero(); k + 1];
    row[0] = MultiPoly::one();
    for &v in vars {
        let xv = MultiPoly::var(v);
        match kind {
            // h_j(.., v) = h_j(..) + v·h_{j−1}(.., v): ascending in place.
            SymKind::H => {
                for j in 1..=k {
                    let add = &xv * &row[j - 1];
                    row[j] += &add;
                }
            }
            // e_j(.., v) = e_j(..) + v·e_{j−1}(..): descending in place.
            SymKind::E => {
                for j in (1..=k).rev() {
                    let add = &xv * &row[j - 1];
                    row[j] += &add;
                }
            }
        }
    }
    row.swap_remove(k)
}

fn xs(range: std::ops::RangeInclusive<usize>) -> Vec<Var> {
    range.map(x).collect()
}

/// `h_k(x_1..x_m)` or `e_k(x_1..x_m)`.
pub fn sym_func(kind: SymKind, k: usize, m: usize) -> MultiPoly {
    symmetric(kind, k, &xs(1..=m))
}

/// `h_k` for signed `k`, zero below 0.
fn h(k: i64, vars: &[Var]) -> MultiPoly {
    if k < 0 {
        MultiPoly::zero()
    } else {
        symmetric(SymKind::H, k as usize, vars)
    }
}

/// `s_{(a)^rows}(x_1..x_m)` as the Jacobi–Trudi determinant `det(h_{a−i+j})`.
pub fn schur_rect(a: usize, rows: usize, m: usize) -> MultiPoly {
    let vars = xs(1..=m);
    let matrix: Vec<Vec<MultiPoly>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| h(a as i64 - i as i64 + j as i64, &vars))
                .collect()
        })
        .collect();
    det(&matrix)
}

/// Determinant of `(h_{a−b}(x_1..x_b))` over rows `a ∈ A`, columns `b ∈ B`.
pub fn phi_image(spec: &MinorSpec) -> MultiPoly {
    let matrix: Vec<Vec<MultiPoly>> = spec
        .rows
        .iter()
        .map(|&a| {
            spec.cols
                .iter()
                .map(|&b| h(a as i64 - b as i64, &xs(1..=b)))
                .collect()
        })
        .collect();
    det(&matrix)
}

/// The ring map `z[i,j] ↦ h_{i−j}(x_1..x_j)` applied to a polynomial.
pub fn phi(f: &MultiPoly) -> Result<MultiPoly> {
    f.substitute(|v| match v {
        Var::Z(i, j) => Some(h(i as i64 - j as i64, &xs(1..=j as usize))),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::minor;
    use crate::perm::Permutation;
    use crate::poly::{z, Monomial};
    use proptest::prelude::*;

    fn poly(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    /// Sum of `x^content` over semistandard fillings of an `a`-by-`rows`
    /// rectangle with entries in `1..=m`.
    fn tableau_sum(a: usize, rows: usize, m: usize) -> MultiPoly {
        fn fill(cells: &mut Vec<usize>, a: usize, rows: usize, m: usize, out: &mut MultiPoly) {
            let idx = cells.len();
            if idx == a * rows {
                let mono = Monomial::from_pairs(cells.iter().map(|&v| (x(v), 1)));
                *out += &MultiPoly::monomial(mono);
                return;
            }
            let (r, c) = (idx / a, idx % a);
            let lo_row = if c > 0 { cells[idx - 1] } else { 1 };
            let lo_col = if r > 0 { cells[idx - a] + 1 } else { 1 };
            for v in lo_row.max(lo_col)..=m {
                cells.push(v);
                fill(cells, a, rows, m, out);
                cells.pop();
            }
        }
        let mut out = MultiPoly::zero();
        fill(&mut Vec::new(), a, rows, m, &mut out);
        out
    }

    #[test]
    fn basic_values() {
        assert_eq!(sym_func(SymKind::H, 0, 3), MultiPoly::one());
        assert_eq!(sym_func(SymKind::E, 0, 0), MultiPoly::one());
        assert_eq!(sym_func(SymKind::E, 4, 3), MultiPoly::zero());
        assert_eq!(sym_func(SymKind::E, 2, 3), poly("x1*x2 + x1*x3 + x2*x3"));
        assert_eq!(sym_func(SymKind::H, 2, 2), poly("x1^2 + x1*x2 + x2^2"));
        assert_eq!(sym_func(SymKind::H, 3, 4).len(), 20);
        assert_eq!(schur_rect(0, 3, 4), MultiPoly::one());
        assert_eq!(schur_rect(1, 1, 3), poly("x1 + x2 + x3"));
        assert_eq!(schur_rect(1, 1, 3), sym_func(SymKind::E, 1, 3));
        assert_eq!(schur_rect(1, 3, 3), sym_func(SymKind::E, 3, 3));
        assert_eq!(schur_rect(2, 2, 3).len(), 6);
    }

    #[test]
    fn jacobi_trudi_matches_tableaux() {
        for a in 0..=3 {
            for rows in 0..=3 {
                for m in 0..=4 {
                    assert_eq!(
                        schur_rect(a, rows, m),
                        tableau_sum(a, rows, m),
                        "a={a} rows={rows} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&MultiPoly::var(z(2, 1))).unwrap(), poly("x1"));
        assert_eq!(
            phi_image(&MinorSpec::new(vec![2], vec![1]).unwrap()),
            poly("x1")
        );
        let diag = MinorSpec::new(vec![1, 3, 4], vec![1, 3, 4]).unwrap();
        assert_eq!(phi_image(&diag), MultiPoly::one());
    }

    #[test]
    fn phi_of_double_prime_minor_is_rectangular_schur() {
        // rows [p, p+r], cols [q−r, q] maps to s_{(p−q+r)^{r+1}}(x_1..x_q).
        for (p, q, r) in [(4, 4, 2), (6, 7, 3), (3, 2, 1), (5, 3, 1), (4, 3, 2)] {
            let spec = MinorSpec::new((p..=p + r).collect(), (q - r..=q).collect()).unwrap();
            assert_eq!(
                phi_image(&spec),
                schur_rect(p + r - q, r + 1, q),
                "({p},{q},{r})"
            );
        }
    }

    fn spec_strategy() -> impl Strategy<Value = (usize, MinorSpec)> {
        use proptest::sample::subsequence;
        (2usize..=6).prop_flat_map(|n| {
            (1..=n.min(4)).prop_flat_map(move |k| {
                let all: Vec<usize> = (1..=n).collect();
                (subsequence(all.clone(), k), subsequence(all, k))
                    .prop_map(move |(a, b)| (n, MinorSpec::new(a, b).unwrap()))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn phi_is_entrywise((n, spec) in spec_strategy()) {
            let (f, _) = minor(&Permutation::identity(n), &spec).unwrap();
            prop_assert_eq!(phi(&f).unwrap(), phi_image(&spec));
        }
    }
}
