use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{hermite_normal_form, smith_normal_form, solve_integer_system, IntMatrix};

/// Finitely generated abelian group `Z^rank + Z/t_1 + ... + Z/t_m` together
/// with a surjection from `Z^generators` onto it.
///
/// Torsion is kept as invariant factors (`t_i | t_{i+1}`, all `>= 2`). The
/// projector has `rank` free rows followed by one row per torsion factor;
/// torsion rows are reduced into `[0, t_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupPresentation {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    pub projector: IntMatrix,
}

impl AbelianGroupPresentation {
    pub fn generators(&self) -> usize {
        self.projector.cols()
    }

    /// Image of an integer vector, split into free coordinates and torsion
    /// residues.
    pub fn image(&self, x: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let y = self.projector.mul_vec(x);
        let (free, tors) = y.split_at(self.rank);
        let tors = tors.iter().zip(&self.torsion).map(|(v, t)| v.mod_floor(t)).collect();
        (free.to_vec(), tors)
    }

    /// Primary decomposition of the torsion part as `(p, p^k)` pairs, sorted.
    pub fn primary_torsion(&self) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::new();
        for t in &self.torsion {
            let mut rest = t.clone();
            let mut p = BigInt::from(2);
            while &p * &p <= rest {
                if rest.is_multiple_of(&p) {
                    let mut q = BigInt::one();
                    while rest.is_multiple_of(&p) {
                        rest /= &p;
                        q *= &p;
                    }
                    out.push((p.clone(), q));
                }
                p += 1;
            }
            if rest > BigInt::one() {
                out.push((rest.clone(), rest));
            }
        }
        out.sort();
        out
    }

    /// Relation matrix of the target group itself: zero columns for the free
    /// part, `t_i e_i` for each torsion coordinate.
    fn target_relations(&self) -> Vec<Vec<BigInt>> {
        let dim = self.rank + self.torsion.len();
        self.torsion
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut c = vec![BigInt::zero(); dim];
                c[self.rank + i] = t.clone();
                c
            })
            .collect()
    }

    /// Checks that `projector` (same target shape) kills every column of
    /// `relations` and is onto; then it induces an isomorphism from the same
    /// cokernel and is a legitimate change of presentation.
    pub fn accepts_projector(&self, relations: &IntMatrix, projector: &IntMatrix) -> bool {
        let dim = self.rank + self.torsion.len();
        if projector.rows() != dim || projector.cols() != self.generators() {
            return false;
        }
        let candidate = AbelianGroupPresentation {
            rank: self.rank,
            torsion: self.torsion.clone(),
            projector: projector.clone(),
        };
        for j in 0..relations.cols() {
            let (f, t) = candidate.image(&relations.column(j));
            if f.iter().chain(&t).any(|x| !x.is_zero()) {
                return false;
            }
        }
        // onto: [projector | target relations] has trivial cokernel
        let mut cols: Vec<Vec<BigInt>> = (0..projector.cols()).map(|j| projector.column(j)).collect();
        cols.extend(self.target_relations());
        let m = IntMatrix::from_rows(dim, &cols).transpose();
        let snf = smith_normal_form(&m);
        snf.rank == dim && snf.invariant_factors().iter().all(One::is_one)
    }

    /// Matrix of the automorphism sending this presentation's coordinates to
    /// those of `other` (same group, same generators): `other = phi * self`
    /// modulo torsion.
    pub fn change_of_basis_to(&self, other: &AbelianGroupPresentation) -> Option<IntMatrix> {
        let dim = self.rank + self.torsion.len();
        let mut cols: Vec<Vec<BigInt>> = (0..self.generators()).map(|j| self.projector.column(j)).collect();
        cols.extend(self.target_relations());
        let aug = IntMatrix::from_rows(dim, &cols).transpose();
        let mut phi = IntMatrix::zeros(dim, dim);
        for i in 0..dim {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::one();
            let y = solve_integer_system(&aug, &e)?;
            let x = &y[..self.generators()];
            let (f, t) = other.image(x);
            for (r, v) in f.into_iter().chain(t).enumerate() {
                phi.set(r, i, v);
            }
        }
        Some(phi)
    }
}

impl fmt::Display for AbelianGroupPresentation {
    /// `Z^5 + Z/2 + Z/2`, `Z`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Presentation of `Z^rows / image(a)`. The free coordinates are put in row
/// Hermite normal form so that, e.g., the rays of `P^2` give degrees `1,1,1`
/// rather than `-1,-1,-1`.
pub fn cokernel(a: &IntMatrix) -> AbelianGroupPresentation {
    let k = a.rows();
    let snf = smith_normal_form(a);
    let mut torsion = Vec::new();
    let mut torsion_rows = Vec::new();
    for i in 0..snf.rank {
        let d = snf.d.get(i, i);
        if !d.is_one() {
            torsion.push(d.clone());
            torsion_rows.push(snf.u.row(i).iter().map(|x| x.mod_floor(d)).collect::<Vec<_>>());
        }
    }
    let free_rows: Vec<Vec<BigInt>> = (snf.rank..k).map(|i| snf.u.row(i).to_vec()).collect();
    let rank = free_rows.len();
    let free_rows = if rank > 0 {
        hermite_normal_form(&IntMatrix::from_rows(k, &free_rows)).h.row_vectors()
    } else {
        free_rows
    };
    let mut rows = free_rows;
    rows.extend(torsion_rows);
    AbelianGroupPresentation { rank, torsion, projector: IntMatrix::from_rows(k, &rows) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::pairing_matrix;

    fn rays(v: &[&[i64]]) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        pairing_matrix(v[0].len(), &rows)
    }

    #[test]
    fn projective_plane() {
        let g = cokernel(&rays(&[&[1, 0], &[0, 1], &[-1, -1]]));
        assert_eq!(g.rank, 1);
        assert!(g.torsion.is_empty());
        assert_eq!(g.projector, IntMatrix::from_i64(&[&[1, 1, 1]]));
        assert_eq!(g.to_string(), "Z");
    }

    #[test]
    fn surface_021_has_three_torsion() {
        let a = rays(&[&[2, -1], &[-1, 2], &[-1, -1]]);
        let g = cokernel(&a);
        assert_eq!(g.rank, 1);
        assert_eq!(g.torsion, vec![BigInt::from(3)]);
        for j in 0..a.cols() {
            let (f, t) = g.image(&a.column(j));
            assert!(f.iter().chain(&t).all(Zero::is_zero));
        }
        // the conventional projector (a+b+c, [2b+c]) is an equivalent presentation
        let conventional = IntMatrix::from_i64(&[&[1, 1, 1], &[0, 2, 1]]);
        assert!(g.accepts_projector(&a, &conventional));
        assert!(!g.accepts_projector(&a, &IntMatrix::from_i64(&[&[1, 1, 1], &[0, 0, 0]])));
        let other = AbelianGroupPresentation { projector: conventional, ..g.clone() };
        let phi = g.change_of_basis_to(&other).unwrap();
        for j in 0..3 {
            let mut e = vec![BigInt::zero(); 3];
            e[j] = BigInt::one();
            let (f, t) = g.image(&e);
            let mapped = phi.mul_vec(&[f[0].clone(), t[0].clone()]);
            let (f2, t2) = other.image(&e);
            assert_eq!(mapped[0], f2[0]);
            assert_eq!(mapped[1].mod_floor(&BigInt::from(3)), t2[0]);
        }
    }

    #[test]
    fn primary_form_of_torsion() {
        let g = AbelianGroupPresentation {
            rank: 0,
            torsion: vec![BigInt::from(12)],
            projector: IntMatrix::zeros(1, 0),
        };
        assert_eq!(
            g.primary_torsion(),
            vec![(BigInt::from(2), BigInt::from(4)), (BigInt::from(3), BigInt::from(3))]
        );
    }
}
