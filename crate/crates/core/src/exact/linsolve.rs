//! Exact linear solving by reduced row echelon form.

use super::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub enum SolutionSet<F> {
    Unique(Vec<F>),
    /// `particular + Σ t_i · basis[i]` for free parameters `t_i`.
    Family { particular: Vec<F>, basis: Vec<Vec<F>> },
    Inconsistent,
}

impl<F: Field> SolutionSet<F> {
    pub fn unique(&self) -> Option<&[F]> {
        match self {
            SolutionSet::Unique(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        !matches!(self, SolutionSet::Inconsistent)
    }
}

/// Solves `A x = b` for a rectangular `A` (rows of equal length `ncols`).
/// Pivots are the first nonzero entry in each column, so the result is exact
/// whenever the field's zero test is.
pub fn solve_linear_exact<F: Field>(a: &[Vec<F>], b: &[F], ncols: usize) -> SolutionSet<F> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), ncols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let nrows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv();
        for c in col..=ncols {
            let v = m[row][c].clone() * inv.clone();
            m[row][c] = v;
        }
        for r in 0..nrows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=ncols {
                let v = m[r][c].clone() - f.clone() * m[row][c].clone();
                m[r][c] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[ncols].is_zero()) {
        return SolutionSet::Inconsistent;
    }
    let mut particular = vec![F::zero(); ncols];
    for (i, &pc) in pivots.iter().enumerate() {
        particular[pc] = m[i][ncols].clone();
    }
    if pivots.len() == ncols {
        return SolutionSet::Unique(particular);
    }
    let basis = (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![F::zero(); ncols];
            v[free] = F::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][free].clone();
            }
            v
        })
        .collect();
    SolutionSet::Family { particular, basis }
}

/// Determinant by cofactor expansion. Division free, so it also serves
/// commutative rings; intended for the small systems of this crate.
pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    match n {
        0 => F::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = F::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<F>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let t = m[0][j].clone() * determinant(&minor);
                acc = if j % 2 == 0 { acc + t } else { acc - t };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::Gq;
    use proptest::prelude::*;

    fn g(n: i64) -> Gq {
        Gq::int(n)
    }

    #[test]
    fn identity_returns_rhs() {
        let a = vec![vec![g(1), g(0)], vec![g(0), g(1)]];
        let b = vec![Gq::frac(3, 7), g(-2)];
        assert_eq!(solve_linear_exact(&a, &b, 2), SolutionSet::Unique(b.clone()));
    }

    #[test]
    fn overdetermined_inconsistent() {
        let a = vec![vec![g(1)], vec![g(2)]];
        assert_eq!(solve_linear_exact(&a, &[g(1), g(3)], 1), SolutionSet::Inconsistent);
        assert_eq!(solve_linear_exact(&a, &[g(1), g(2)], 1), SolutionSet::Unique(vec![g(1)]));
    }

    #[test]
    fn underdetermined_family() {
        let a = vec![vec![g(1), g(1)]];
        match solve_linear_exact(&a, &[g(2)], 2) {
            SolutionSet::Family { particular, basis } => {
                assert_eq!(particular, vec![g(2), g(0)]);
                assert_eq!(basis, vec![vec![g(-1), g(1)]]);
            }
            other => panic!("{:?}", other),
        }
    }

    fn cramer(a: &[Vec<Gq>], b: &[Gq]) -> Option<Vec<Gq>> {
        let d = determinant(a);
        if d.is_zero() {
            return None;
        }
        Some(
            (0..a.len())
                .map(|c| {
                    let m: Vec<Vec<Gq>> = a
                        .iter()
                        .zip(b)
                        .map(|(row, bi)| {
                            let mut r = row.clone();
                            r[c] = bi.clone();
                            r
                        })
                        .collect();
                    determinant(&m) / d.clone()
                })
                .collect(),
        )
    }

    proptest! {
        #[test]
        fn agrees_with_cramer(n in 1usize..=4, seed in proptest::collection::vec((-5i64..=5, 1i64..=4), 20)) {
            let mut it = seed.iter().cycle();
            let mut next = || { let (p, q) = it.next().unwrap(); Gq::frac(*p, *q) };
            let a: Vec<Vec<Gq>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
            let b: Vec<Gq> = (0..n).map(|_| next()).collect();
            match (cramer(&a, &b), solve_linear_exact(&a, &b, n)) {
                (Some(x), SolutionSet::Unique(y)) => prop_assert_eq!(x, y),
                (None, SolutionSet::Unique(_)) => prop_assert!(false, "singular matrix solved uniquely"),
                (Some(_), _) => prop_assert!(false, "regular matrix not solved uniquely"),
                (None, _) => {}
            }
        }
    }
}
