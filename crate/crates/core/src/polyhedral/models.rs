//! C(X,K) = ⊕_J R̄_J(K) ⊗ H^J, B(X,K) = ⊕_J B_J(K) ⊗ H^J with its product, the dga variant
//! with coefficient differentials, and the generalized Koszul model R(X,K).
//!
//! Coefficient tensors are ordered by vertex; their factors are reduced generators in the
//! degrees of H̃*(X_i) (the desuspended classes).

use std::collections::HashMap;

use super::spaces::Space;
use crate::dga::{parity_sign, Accumulator, BasisElement, Combination, MonomialComplex, ProductTable};
use crate::error::{Error, Result};
use crate::real_mac::{
    bits, bk_differential, bk_product_pair, pair_label, rbar_differential, rbar_product_pair, submasks, PairBasis,
};
use crate::simplicial::SimplicialComplex;

/// `(I, L, h)` with `h[n]` the generator chosen for the n-th vertex of `I ∪ L`.
pub type TensorKey = (u64, u64, Vec<usize>);

type PairRule = fn(&SimplicialComplex, (u64, u64), (u64, u64)) -> Option<(u64, u64, i64)>;

/// The basis shared by C(X,K) and B(X,K), in the same order, so f_X fixes indices.
#[derive(Clone, Debug)]
pub struct TensorBasis {
    pub keys: Vec<TensorKey>,
    index: HashMap<TensorKey, usize>,
}

impl TensorBasis {
    pub fn new(k: &SimplicialComplex, spaces: &[Space]) -> Result<Self> {
        check_arity(k, spaces)?;
        let mut keys = Vec::new();
        for &(i, l) in &PairBasis::new(k).pairs {
            // first vertex varies slowest
            let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
            for v in bits(i | l) {
                let n = spaces[v as usize].len();
                choices = choices
                    .into_iter()
                    .flat_map(|c| {
                        (0..n).map(move |g| {
                            let mut c = c.clone();
                            c.push(g);
                            c
                        })
                    })
                    .collect();
            }
            keys.extend(choices.into_iter().map(|h| (i, l, h)));
        }
        let index = keys.iter().cloned().enumerate().map(|(n, key)| (key, n)).collect();
        Ok(TensorBasis { keys, index })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn get(&self, key: &TensorKey) -> Option<usize> {
        self.index.get(key).copied()
    }
}

pub(crate) fn check_arity(k: &SimplicialComplex, spaces: &[Space]) -> Result<()> {
    if spaces.len() != k.m() {
        return Err(Error::input(format!(
            "{} spaces given for a complex on {} vertices",
            spaces.len(),
            k.m()
        )));
    }
    Ok(())
}

fn coefficient_degree(spaces: &[Space], j: u64, h: &[usize]) -> i32 {
    bits(j).zip(h).map(|(v, &g)| spaces[v as usize].degrees[g]).sum()
}

fn tensor_element(odd: char, even: char, spaces: &[Space], key: &TensorKey) -> BasisElement {
    let (i, l, h) = key;
    let j = i | l;
    let (p, q) = (i.count_ones() as i32, l.count_ones() as i32);
    let base = pair_label(odd, even, *i, *l);
    let label = if j == 0 {
        base
    } else {
        let coeffs: Vec<String> = bits(j)
            .zip(h)
            .map(|(v, &g)| format!("{}_{}", spaces[v as usize].ids[g], v + 1))
            .collect();
        format!("{base}|{}", coeffs.join(","))
    };
    BasisElement::new(label, (-p, p + q + coefficient_degree(spaces, j, h)), j)
}

fn base_differential(basis: &TensorBasis, base: &Combination, pairs: &PairBasis, h: &[usize]) -> Combination {
    let mut acc = Accumulator::new();
    for &(t, v) in base {
        let (i, l) = pairs.pairs[t];
        acc.add(basis.get(&(i, l, h.to_vec())).expect("supports are preserved"), v);
    }
    acc.finish()
}

/// d_C of a coefficient tensor: Σ_p (−1)^{|h_1|+…+|h_{p−1}|} h_1 ⊗ … ⊗ d h_p ⊗ …
fn coefficient_differential(spaces: &[Space], j: u64, h: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let verts: Vec<usize> = bits(j).map(|v| v as usize).collect();
    let mut out = Vec::new();
    let mut before = 0;
    for (p, &v) in verts.iter().enumerate() {
        for &(g, c) in &spaces[v].differential[h[p]] {
            let mut h2 = h.to_vec();
            h2[p] = g;
            out.push((h2, c * parity_sign(before)));
        }
        before += spaces[v].degrees[h[p]];
    }
    out
}

fn assemble(
    name: &str,
    k: &SimplicialComplex,
    spaces: &[Space],
    odd: char,
    even: char,
    base_d: fn(&SimplicialComplex, &PairBasis, u64, u64) -> Combination,
    with_coefficient_d: bool,
) -> Result<(MonomialComplex, TensorBasis)> {
    let basis = TensorBasis::new(k, spaces)?;
    let pairs = PairBasis::new(k);
    let mut differential = Vec::with_capacity(basis.len());
    for (i, l, h) in &basis.keys {
        let mut acc = Accumulator::new();
        acc.add_all(&base_differential(&basis, &base_d(k, &pairs, *i, *l), &pairs, h), 1);
        if with_coefficient_d {
            let sign = parity_sign(l.count_ones() as i64);
            for (h2, c) in coefficient_differential(spaces, i | l, h) {
                acc.add(basis.get(&(*i, *l, h2)).expect("same support"), c * sign);
            }
        }
        differential.push(acc.finish());
    }
    let elements = basis
        .keys
        .iter()
        .map(|key| tensor_element(odd, even, spaces, key))
        .collect();
    let bigraded = !(with_coefficient_d && spaces.iter().any(Space::has_differential));
    let c = MonomialComplex::new(name, elements, differential, bigraded)?.with_unit(0);
    Ok((c, basis))
}

/// (β⊗h)(β'⊗h') = (−1)^{|h||β'|} (ββ') ⊗ (hh'), where hh' multiplies vertexwise in
/// H̃*(X_i) after the Koszul sign of interleaving the two tensors by vertex.
fn tensor_product_table(k: &SimplicialComplex, spaces: &[Space], basis: &TensorBasis, rule: PairRule) -> ProductTable {
    let degree = |v: u32, g: usize| spaces[v as usize].degrees[g];
    ProductTable::from_fn(basis.len(), |a, b| {
        let (i, l, h) = &basis.keys[a];
        let (i2, l2, h2) = &basis.keys[b];
        let Some((i3, l3, base_sign)) = rule(k, (*i, *l), (*i2, *l2)) else {
            return Vec::new();
        };
        let (j, j2) = (i | l, i2 | l2);
        let left: HashMap<u32, usize> = bits(j).zip(h.iter().copied()).collect();
        let right: HashMap<u32, usize> = bits(j2).zip(h2.iter().copied()).collect();

        // interleaving: pairs (x from the left at vertex p, y from the right at vertex q < p)
        let mut interleave = 0i64;
        for (&p, &x) in &left {
            for (&q, &y) in &right {
                if q < p {
                    interleave += (degree(p, x) * degree(q, y)) as i64;
                }
            }
        }
        let h_deg = coefficient_degree(spaces, j, h) as i64;
        let kappa = h_deg * l2.count_ones() as i64;
        let sign = base_sign * parity_sign(interleave + kappa);

        // vertexwise products, expanded as a cartesian product of combinations
        let mut terms: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), sign)];
        for v in bits(i3 | l3) {
            let factor: Combination = match (left.get(&v), right.get(&v)) {
                (Some(&x), Some(&y)) => spaces[v as usize].products[x][y].clone(),
                (Some(&x), None) | (None, Some(&x)) => vec![(x, 1)],
                (None, None) => unreachable!("product support is the union of supports"),
            };
            if factor.is_empty() {
                return Vec::new();
            }
            terms = terms
                .into_iter()
                .flat_map(|(word, c)| {
                    factor.iter().map(move |&(g, f)| {
                        let mut w = word.clone();
                        w.push(g);
                        (w, c * f)
                    })
                })
                .collect();
        }
        let mut acc = Accumulator::new();
        for (word, c) in terms {
            acc.add(basis.get(&(i3, l3, word)).expect("product stays in the basis"), c);
        }
        acc.finish()
    })
}

/// C(X,K) with differential d_R̄ ⊗ id.
pub fn build_cxk(k: &SimplicialComplex, spaces: &[Space]) -> Result<MonomialComplex> {
    Ok(assemble("cxk", k, spaces, 'w', 'y', rbar_differential, false)?.0)
}

/// The product on C(X,K) induced from R̄(K) ⊗ H with the same interchange sign as B(X,K).
pub fn cxk_product(k: &SimplicialComplex, spaces: &[Space]) -> Result<ProductTable> {
    let basis = TensorBasis::new(k, spaces)?;
    Ok(tensor_product_table(k, spaces, &basis, rbar_product_pair))
}

/// B(X,K) with differential d_B ⊗ id and the ∗-product.
pub fn build_bxk(k: &SimplicialComplex, spaces: &[Space]) -> Result<(MonomialComplex, ProductTable)> {
    let (c, basis) = assemble("bxk", k, spaces, 's', 't', bk_differential, false)?;
    let p = tensor_product_table(k, spaces, &basis, bk_product_pair);
    Ok((c, p))
}

/// B(A,K) for finite dga presentations: d(β⊗h) = d_B β ⊗ h + (−1)^{|β|} β ⊗ d_C h.
/// With zero coefficient differentials this is B(X,K) on the nose.
pub fn build_b_dga(k: &SimplicialComplex, spaces: &[Space]) -> Result<(MonomialComplex, ProductTable)> {
    let (c, basis) = assemble("b_dga", k, spaces, 's', 't', bk_differential, true)?;
    let p = tensor_product_table(k, spaces, &basis, bk_product_pair);
    Ok((c, p))
}

/// All reduced generators of all spaces, ordered by (vertex, position); `(vertex, local index)`.
#[derive(Clone, Debug)]
pub struct GlobalGenerators {
    pub list: Vec<(usize, usize)>,
}

impl GlobalGenerators {
    pub fn new(spaces: &[Space]) -> Result<Self> {
        let list: Vec<(usize, usize)> = spaces
            .iter()
            .enumerate()
            .flat_map(|(v, s)| (0..s.len()).map(move |g| (v, g)))
            .collect();
        if list.len() > 63 {
            return Err(Error::input("at most 63 generators in total are supported"));
        }
        Ok(GlobalGenerators { list })
    }

    pub fn all(&self) -> u64 {
        if self.list.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.list.len())
        }
    }

    /// Vertex set of a generator mask.
    pub fn vertices(&self, mask: u64) -> u64 {
        bits(mask).fold(0, |acc, g| acc | 1 << self.list[g as usize].0)
    }

    /// True when two generators of the mask sit over the same vertex.
    pub fn repeats(&self, mask: u64) -> bool {
        self.vertices(mask).count_ones() != mask.count_ones()
    }

    pub fn position(&self, vertex: usize, local: usize) -> usize {
        self.list
            .iter()
            .position(|&x| x == (vertex, local))
            .expect("known generator")
    }
}

/// `(U, B)`: the ub-factors and b-factors as masks over the global generators.
pub type RxkKey = (u64, u64);

fn rxk_keys(k: &SimplicialComplex, gens: &GlobalGenerators) -> Vec<RxkKey> {
    let all = gens.all();
    let mut keys = Vec::new();
    for b in submasks(all) {
        if !k.contains(gens.vertices(b)) {
            continue;
        }
        for u in submasks(all & !b) {
            keys.push((u, b));
        }
    }
    keys.sort_by_key(|&(u, b)| (u.count_ones() + b.count_ones(), b.count_ones(), u, b));
    keys
}

fn rxk_label(spaces: &[Space], gens: &GlobalGenerators, key: RxkKey) -> String {
    if key == (0, 0) {
        return "1".into();
    }
    let name = |g: u32| {
        let (v, l) = gens.list[g as usize];
        format!("{}_{}", spaces[v].ids[l], v + 1)
    };
    let mut s = String::new();
    for g in bits(key.0) {
        s.push_str(&format!("u{}", name(g)));
    }
    for g in bits(key.1) {
        s.push_str(&format!("b{}", name(g)));
    }
    s
}

/// R(X,K): basis (ub_{…})(b_{…}) with no b repeated as ub, b-vertex set in K.
/// d(ub) = b extended with deg₁ signs.
pub fn build_rxk(k: &SimplicialComplex, spaces: &[Space]) -> Result<(MonomialComplex, Vec<RxkKey>, GlobalGenerators)> {
    check_arity(k, spaces)?;
    let gens = GlobalGenerators::new(spaces)?;
    let keys = rxk_keys(k, &gens);
    let index: HashMap<RxkKey, usize> = keys.iter().enumerate().map(|(n, &key)| (key, n)).collect();
    let suspended = |g: u32| {
        let (v, l) = gens.list[g as usize];
        spaces[v].degrees[l] + 1
    };
    let mut elements = Vec::with_capacity(keys.len());
    let mut differential = Vec::with_capacity(keys.len());
    for &(u, b) in &keys {
        let q: i32 = bits(u | b).map(suspended).sum();
        elements.push(BasisElement::new(
            rxk_label(spaces, &gens, (u, b)),
            (-(u.count_ones() as i32), q),
            gens.vertices(u | b),
        ));
        let mut row: Combination = bits(u)
            .filter(|&g| k.contains(gens.vertices(b | 1 << g)))
            .map(|g| {
                (
                    index[&(u & !(1 << g), b | 1 << g)],
                    parity_sign((u & ((1 << g) - 1)).count_ones()),
                )
            })
            .collect();
        row.sort_unstable();
        differential.push(row);
    }
    let c = MonomialComplex::new("rxk", elements, differential, true)?.with_unit(index[&(0, 0)]);
    Ok((c, keys, gens))
}
