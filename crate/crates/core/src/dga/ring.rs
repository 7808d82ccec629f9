//! Cohomology rings over a field, from explicit cocycle representatives.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{parity_sign, MonomialComplex, ProductTable};
use crate::error::{Error, Result};
use crate::linalg::complex::to_field_rows;
use crate::linalg::field::kernel_basis;
use crate::linalg::{Coeff, Echelon, Field, PrimeField, Rationals};

#[derive(Clone, Debug)]
pub struct RingClass<E> {
    pub degree: i32,
    /// Set when the complex is bigraded.
    pub bidegree: Option<(i32, i32)>,
    pub support: u64,
    pub representative: Vec<(usize, E)>,
}

/// Classes with fixed representatives and the structure constants of their products.
pub struct CohomologyRing<F: Field> {
    field: F,
    pub classes: Vec<RingClass<F::Elem>>,
    /// products[i][j] = class coordinates of [rep_i · rep_j], zeros omitted.
    products: Vec<Vec<Vec<(usize, F::Elem)>>>,
}

/// One degree of one component: the echelon basis of ker d over im d.
struct Slice<F: Field> {
    echelon: Echelon<F>,
    /// basis index → coordinate in this slice
    position: BTreeMap<usize, usize>,
    dim: usize,
    /// kernel vector index → global class id (only for independent ones)
    class_of_tag: Vec<Option<usize>>,
}

impl<F: Field> CohomologyRing<F> {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, F::Elem)] {
        &self.products[i][j]
    }

    pub fn classes_in_degree(&self, degree: i32) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].degree == degree)
            .collect()
    }

    /// The class represented by the unit basis element, if there is one.
    pub fn unit_class(&self, unit: usize) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.representative.len() == 1 && c.representative[0].0 == unit)
    }

    /// First pair violating `xy = (−1)^{|x||y|} yx`.
    pub fn graded_commutativity_witness(&self) -> Option<(usize, usize)> {
        let f = &self.field;
        for i in 0..self.len() {
            for j in i..self.len() {
                let s = parity_sign(self.classes[i].degree * self.classes[j].degree);
                let mut lhs: BTreeMap<usize, F::Elem> = self.products[i][j].iter().cloned().collect();
                for (k, v) in &self.products[j][i] {
                    let v = if s < 0 { f.neg(v) } else { v.clone() };
                    let e = lhs.entry(*k).or_insert_with(|| f.zero());
                    *e = f.sub(e, &v);
                }
                if lhs.values().any(|v| !f.is_zero(v)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn summary(&self, c: &MonomialComplex, coeff: Coeff) -> RingSummary {
        let classes = self
            .classes
            .iter()
            .enumerate()
            .map(|(id, k)| ClassSummary {
                id,
                degree: k.degree,
                bidegree: k.bidegree,
                representative: format_field_combination(c, &k.representative, &self.field),
            })
            .collect();
        let mut products = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if !self.products[i][j].is_empty() {
                    products.push(ProductSummary {
                        left: i,
                        right: j,
                        value: self.products[i][j].iter().map(|(k, v)| (*k, v.to_string())).collect(),
                    });
                }
            }
        }
        RingSummary {
            model: c.name().to_string(),
            coeff,
            classes,
            products,
            graded_commutative: self.graded_commutativity_witness().is_none(),
        }
    }
}

fn format_field_combination<F: Field>(c: &MonomialComplex, v: &[(usize, F::Elem)], f: &F) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter()
        .map(|(i, x)| {
            if *x == f.one() {
                c.label(*i).to_string()
            } else {
                format!("({x}) {}", c.label(*i))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Serializable view of a ring with coefficients printed as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSummary {
    pub model: String,
    pub coeff: Coeff,
    pub classes: Vec<ClassSummary>,
    pub products: Vec<ProductSummary>,
    pub graded_commutative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub id: usize,
    pub degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<(i32, i32)>,
    pub representative: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSummary {
    pub left: usize,
    pub right: usize,
    pub value: Vec<(usize, String)>,
}

/// Cohomology ring over `field`. Representatives are the first basis-ordered cocycles that
/// extend an echelon basis of the coboundaries; products are reduced modulo coboundaries.
pub fn cohomology_ring<F: Field>(c: &MonomialComplex, p: &ProductTable, field: F) -> Result<CohomologyRing<F>> {
    let mut classes: Vec<RingClass<F::Elem>> = Vec::new();
    let mut slices: Vec<Slice<F>> = Vec::new();
    let mut slice_of = vec![usize::MAX; c.len()];

    for comp in c.components() {
        let block = c.block(&comp)?;
        let q = c.element(comp[0]).bidegree.1;
        let nd = block.by_degree.len();
        for k in 0..nd {
            let here = &block.by_degree[k];
            let dim = here.len();
            let kernel = if k + 1 < nd {
                let rows = to_field_rows(&field, &block.complex.differentials[k]);
                kernel_basis(&field, &rows, dim)
            } else {
                (0..dim)
                    .map(|i| {
                        (0..dim)
                            .map(|j| if i == j { field.one() } else { field.zero() })
                            .collect()
                    })
                    .collect()
            };
            let mut echelon = Echelon::new(field.clone(), dim, kernel.len());
            let zero_tag = vec![field.zero(); kernel.len()];
            if k > 0 {
                let d = &block.complex.differentials[k - 1];
                for col in 0..d.cols() {
                    let v: Vec<F::Elem> = (0..d.rows()).map(|r| field.from_bigint(d.get(r, col))).collect();
                    echelon.insert(&v, &zero_tag);
                }
            }
            let mut class_of_tag = vec![None; kernel.len()];
            for (t, v) in kernel.iter().enumerate() {
                let mut tag = zero_tag.clone();
                tag[t] = field.one();
                if echelon.insert(v, &tag) {
                    class_of_tag[t] = Some(classes.len());
                    let degree = block.lowest + k as i32;
                    classes.push(RingClass {
                        degree,
                        bidegree: c.is_bigraded().then_some((degree - q, q)),
                        support: c.element(comp[0]).support,
                        representative: here
                            .iter()
                            .zip(v)
                            .filter(|(_, x)| !field.is_zero(x))
                            .map(|(&i, x)| (i, x.clone()))
                            .collect(),
                    });
                }
            }
            for &i in here {
                slice_of[i] = slices.len();
            }
            slices.push(Slice {
                echelon,
                position: here.iter().enumerate().map(|(p, &i)| (i, p)).collect(),
                dim,
                class_of_tag,
            });
        }
    }

    let n = classes.len();
    let products: Vec<Vec<Vec<(usize, F::Elem)>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| class_product(c, p, &field, &classes[i], &classes[j], &slices, &slice_of))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    Ok(CohomologyRing {
        field,
        classes,
        products,
    })
}

fn class_product<F: Field>(
    c: &MonomialComplex,
    p: &ProductTable,
    field: &F,
    x: &RingClass<F::Elem>,
    y: &RingClass<F::Elem>,
    slices: &[Slice<F>],
    slice_of: &[usize],
) -> Result<Vec<(usize, F::Elem)>> {
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (a, u) in &x.representative {
        if p.row(*a).is_empty() {
            continue;
        }
        for (b, v) in &y.representative {
            let uv = field.mul(u, v);
            for &(t, k) in p.get(*a, *b) {
                let e = acc.entry(t).or_insert_with(|| field.zero());
                *e = field.add(e, &field.mul(&uv, &field.from_i64(k)));
            }
        }
    }
    // split by slice and reduce each piece
    let mut pieces: BTreeMap<usize, Vec<F::Elem>> = BTreeMap::new();
    for (t, v) in acc {
        if field.is_zero(&v) {
            continue;
        }
        let s = slice_of[t];
        let piece = pieces.entry(s).or_insert_with(|| vec![field.zero(); slices[s].dim]);
        piece[slices[s].position[&t]] = v;
    }
    let mut out: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (s, v) in pieces {
        let (residual, tag) = slices[s].echelon.reduce(&v);
        if residual.iter().any(|r| !field.is_zero(r)) {
            return Err(Error::structural(format!(
                "{}: a product of cocycles is not a cocycle (check Leibniz)",
                c.name()
            )));
        }
        for (t, coef) in tag.into_iter().enumerate() {
            if field.is_zero(&coef) {
                continue;
            }
            let id = slices[s].class_of_tag[t].expect("dependent kernel vectors carry no tag");
            out.insert(id, coef);
        }
    }
    Ok(out.into_iter().collect())
}

/// Ring summary over ℚ or ℤ/p; over ℤ only the additive structure is available.
pub fn ring_for_coeff(c: &MonomialComplex, p: &ProductTable, coeff: Coeff) -> Result<RingSummary> {
    match coeff {
        Coeff::Z => Err(Error::Coefficients(
            "ring structure is computed over a field; rerun with --coeff Q or --coeff Zp (e.g. Z2)".into(),
        )),
        Coeff::Q => Ok(cohomology_ring(c, p, Rationals)?.summary(c, coeff)),
        Coeff::Zp(q) => Ok(cohomology_ring(c, p, PrimeField::new(q)?)?.summary(c, coeff)),
    }
}
