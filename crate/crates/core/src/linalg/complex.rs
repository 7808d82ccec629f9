//! Finite cochain complexes of free modules and their cohomology.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cohomology::{Coeff, CohomologyResult, Group};
use super::field::{self, Field, PrimeField, Rationals};
use super::integer::{invariant_factors, smith_normal_form, IntegerMatrix};
use crate::error::{Error, Result};

/// `0 → C^a → C^{a+1} → … → 0` with `differentials[k]: C^{a+k} → C^{a+k+1}`
/// stored as a `ranks[k+1] × ranks[k]` matrix.
#[derive(Clone, Debug)]
pub struct FiniteCochainComplex {
    pub lowest_degree: i32,
    pub ranks: Vec<usize>,
    pub differentials: Vec<IntegerMatrix>,
}

impl FiniteCochainComplex {
    pub fn new(lowest_degree: i32, ranks: Vec<usize>, differentials: Vec<IntegerMatrix>) -> Result<Self> {
        if differentials.len() + 1 != ranks.len().max(1) {
            return Err(Error::structural(format!(
                "{} modules need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.cols() != ranks[k] || d.rows() != ranks[k + 1] {
                return Err(Error::structural(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    lowest_degree + k as i32,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        Ok(FiniteCochainComplex {
            lowest_degree,
            ranks,
            differentials,
        })
    }

    /// Errors with the first degree where `d ∘ d ≠ 0`.
    pub fn check_d_squared(&self) -> Result<()> {
        for (k, pair) in self.differentials.windows(2).enumerate() {
            if !pair[1].mul(&pair[0]).is_zero() {
                return Err(Error::structural(format!(
                    "d∘d ≠ 0 starting in degree {}",
                    self.lowest_degree + k as i32
                )));
            }
        }
        Ok(())
    }

    /// Cohomology per degree. Over ℤ torsion is read off the invariant factors of the
    /// incoming differential and reported in the target degree.
    pub fn cohomology(&self, coeff: Coeff) -> Result<CohomologyResult> {
        self.check_d_squared()?;
        let n = self.ranks.len();
        // rank and (over ℤ) invariant factors of each differential
        let mut ranks_of_d = Vec::with_capacity(self.differentials.len());
        let mut torsion_of_d = Vec::with_capacity(self.differentials.len());
        for d in &self.differentials {
            let (r, t) = rank_and_torsion(d, coeff)?;
            ranks_of_d.push(r);
            torsion_of_d.push(t);
        }
        let mut out = CohomologyResult::new();
        for k in 0..n {
            let outgoing = if k < self.differentials.len() { ranks_of_d[k] } else { 0 };
            let incoming = if k > 0 { ranks_of_d[k - 1] } else { 0 };
            let free = self.ranks[k] - outgoing - incoming;
            let torsion = if k > 0 { torsion_of_d[k - 1].clone() } else { Vec::new() };
            out.add(
                self.lowest_degree + k as i32,
                Group {
                    free_rank: free,
                    torsion,
                },
            );
        }
        Ok(out)
    }
}

/// Rank of `d` over the coefficient ring, and its invariant factors > 1 when over ℤ.
pub fn rank_and_torsion(d: &IntegerMatrix, coeff: Coeff) -> Result<(usize, Vec<BigInt>)> {
    if d.rows() == 0 || d.cols() == 0 || d.is_zero() {
        return Ok((0, Vec::new()));
    }
    Ok(match coeff {
        Coeff::Z => {
            let f = invariant_factors(d);
            let r = f.len();
            (r, f.into_iter().filter(|x| !x.is_one()).collect())
        }
        Coeff::Q => (
            field::rank(&Rationals, to_field_rows(&Rationals, d), d.cols()),
            Vec::new(),
        ),
        Coeff::Zp(p) => {
            let fp = PrimeField::new(p)?;
            (field::rank(&fp, to_field_rows(&fp, d), d.cols()), Vec::new())
        }
    })
}

pub fn to_field_rows<F: Field>(field: &F, d: &IntegerMatrix) -> Vec<Vec<F::Elem>> {
    (0..d.rows())
        .map(|i| d.row(i).iter().map(|x| field.from_bigint(x)).collect())
        .collect()
}

/// A preimage vector in the representation native to the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preimage {
    Integer(Vec<BigInt>),
    Rational(Vec<BigRational>),
    Modular(Vec<u64>),
}

/// Some `x` with `A x = b` over the coefficient ring, or `None` if `b ∉ im A`.
pub fn solve_in_image(a: &IntegerMatrix, b: &[BigInt], coeff: Coeff) -> Result<Option<Preimage>> {
    if a.rows() != b.len() {
        return Err(Error::input(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    Ok(match coeff {
        Coeff::Z => solve_over_z(a, b).map(Preimage::Integer),
        Coeff::Q => {
            let rhs: Vec<_> = b.iter().map(|x| Rationals.from_bigint(x)).collect();
            field::solve(&Rationals, &to_field_rows(&Rationals, a), a.cols(), &rhs).map(Preimage::Rational)
        }
        Coeff::Zp(p) => {
            let fp = PrimeField::new(p)?;
            let rhs: Vec<_> = b.iter().map(|x| fp.from_bigint(x)).collect();
            field::solve(&fp, &to_field_rows(&fp, a), a.cols(), &rhs).map(Preimage::Modular)
        }
    })
}

fn solve_over_z(a: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    // U A V = D, so A x = b  ⇔  D (V⁻¹ x) = U b.
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        let di = if i < a.cols() {
            snf.d.get(i, i).clone()
        } else {
            BigInt::zero()
        };
        if di.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            if !(ci % &di).is_zero() {
                return None;
            }
            y[i] = ci / &di;
        }
    }
    Some(snf.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Coboundary of the 3-cycle: vertices 1,2,3, edges 12,13,23 (rows), δ(v)(e) = ±1.
    fn three_cycle() -> IntegerMatrix {
        IntegerMatrix::from_rows(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]])
    }

    #[test]
    fn multiplication_by_two() {
        let c = FiniteCochainComplex::new(0, vec![1, 1], vec![IntegerMatrix::from_rows(&[vec![2]])]).unwrap();
        let h = c.cohomology(Coeff::Z).unwrap();
        assert_eq!(h.get(0), Group::free(0));
        assert_eq!(h.get(1), Group::with_torsion(0, &[2]));
        let h2 = c.cohomology(Coeff::Zp(2)).unwrap();
        assert_eq!(h2.get(0), Group::free(1));
        assert_eq!(h2.get(1), Group::free(1));
        assert!(c.cohomology(Coeff::Q).unwrap().is_zero());
    }

    #[test]
    fn zero_differentials() {
        let c = FiniteCochainComplex::new(
            -1,
            vec![2, 0, 3],
            vec![IntegerMatrix::zeros(0, 2), IntegerMatrix::zeros(3, 0)],
        )
        .unwrap();
        let h = c.cohomology(Coeff::Z).unwrap();
        assert_eq!(h.get(-1), Group::free(2));
        assert_eq!(h.get(1), Group::free(3));
    }

    #[test]
    fn three_cycle_cohomology() {
        let c = FiniteCochainComplex::new(0, vec![3, 3], vec![three_cycle()]).unwrap();
        let h = c.cohomology(Coeff::Z).unwrap();
        assert_eq!(h.get(0), Group::free(1));
        assert_eq!(h.get(1), Group::free(1));
    }

    #[test]
    fn d_squared_violation_is_an_error() {
        let one = IntegerMatrix::from_rows(&[vec![1]]);
        let c = FiniteCochainComplex::new(0, vec![1, 1, 1], vec![one.clone(), one]).unwrap();
        assert!(matches!(c.cohomology(Coeff::Z), Err(Error::Structural(_))));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(FiniteCochainComplex::new(0, vec![1, 2], vec![IntegerMatrix::zeros(1, 1)]).is_err());
    }

    #[test]
    fn solve_identity_and_two() {
        let b = big(&[3, -4]);
        assert_eq!(
            solve_in_image(&IntegerMatrix::identity(2), &b, Coeff::Z).unwrap(),
            Some(Preimage::Integer(b.clone()))
        );
        let two = IntegerMatrix::from_rows(&[vec![2]]);
        assert_eq!(solve_in_image(&two, &big(&[1]), Coeff::Z).unwrap(), None);
        assert_eq!(
            solve_in_image(&two, &big(&[1]), Coeff::Q).unwrap(),
            Some(Preimage::Rational(vec![BigRational::new(1.into(), 2.into())]))
        );
        assert_eq!(solve_in_image(&two, &big(&[1]), Coeff::Zp(2)).unwrap(), None);
    }

    #[test]
    fn solve_coboundary_round_trip() {
        let d = three_cycle();
        let x0 = big(&[5, -2, 7]);
        let b = d.mul_vec(&x0);
        let Some(Preimage::Integer(x)) = solve_in_image(&d, &b, Coeff::Z).unwrap() else {
            panic!("coboundary must be in the image");
        };
        assert_eq!(d.mul_vec(&x), b);
        // (1,1,1) on edges is not a coboundary of the 3-cycle
        assert_eq!(solve_in_image(&d, &big(&[1, 1, 1]), Coeff::Z).unwrap(), None);
    }
}
