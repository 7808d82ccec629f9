//! The quotient Koszul model R̄(K) and the dga B(K) for the real moment-angle complex,
//! and the signed comparison map between them.
//!
//! Both models have the basis `(I, L)` with `L ∈ K` and `I ∩ L = ∅`, and both bases are
//! enumerated in the same order, so the comparison map fixes indices and only carries signs.

use std::collections::{BTreeMap, HashMap};

use crate::dga::{parity_sign, BasisElement, Combination, MonomialComplex, ProductTable};
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::simplicial::{full_mask, mask_vertices, simplex_order, SimplicialComplex};

/// #{(x ∈ a, y ∈ b) : y < x}.
pub(crate) fn inversions(a: u64, b: u64) -> u32 {
    let mut n = 0;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        n += (a >> y >> 1).count_ones();
    }
    n
}

/// Elements of `mask` below bit `b`.
pub(crate) fn below(mask: u64, b: u32) -> u32 {
    (mask & ((1u64 << b) - 1)).count_ones()
}

/// Bit positions of a mask, increasing.
pub(crate) fn bits(mask: u64) -> impl Iterator<Item = u32> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        (rest != 0).then(|| {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            b
        })
    })
}

/// All submasks of `mask`, in (cardinality, lexicographic) order.
pub(crate) fn submasks(mask: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << mask.count_ones());
    let mut sub = mask;
    loop {
        out.push(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    out.sort_by(|&a, &b| simplex_order(a, b));
    out
}

/// The `(I, L)` basis shared by R̄(K) and B(K).
#[derive(Clone, Debug)]
pub struct PairBasis {
    pub pairs: Vec<(u64, u64)>,
    index: HashMap<(u64, u64), usize>,
}

impl PairBasis {
    /// Ordered by L in simplex order, then I ⊆ [m]∖L in simplex order; the unit comes first.
    pub fn new(k: &SimplicialComplex) -> Self {
        let all = full_mask(k.m());
        let mut pairs = Vec::new();
        for &l in k.simplices() {
            for i in submasks(all & !l) {
                pairs.push((i, l));
            }
        }
        let index = pairs.iter().enumerate().map(|(n, &p)| (p, n)).collect();
        PairBasis { pairs, index }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, i: u64, l: u64) -> Option<usize> {
        self.index.get(&(i, l)).copied()
    }
}

pub(crate) fn pair_label(odd: char, even: char, i: u64, l: u64) -> String {
    if i == 0 && l == 0 {
        return "1".into();
    }
    let mut s = String::new();
    for v in mask_vertices(i) {
        s.push_str(&format!("{odd}{v}"));
    }
    for v in mask_vertices(l) {
        s.push_str(&format!("{even}{v}"));
    }
    s
}

fn pair_element(odd: char, even: char, i: u64, l: u64) -> BasisElement {
    let (p, q) = (i.count_ones() as i32, l.count_ones() as i32);
    BasisElement::new(pair_label(odd, even, i, l), (-p, p + q), i | l)
}

/// Σ_{L∈K} 2^{m−|L|}.
pub fn basis_size(k: &SimplicialComplex) -> usize {
    k.simplices()
        .iter()
        .map(|l| 1usize << (k.m() - l.count_ones() as usize))
        .sum()
}

/// d(ω_I y_L) = Σ_k (−1)^{k+1} ω_{I∖i_k} y_{L+i_k}, dropping terms with L + i_k ∉ K.
pub(crate) fn rbar_differential(k: &SimplicialComplex, basis: &PairBasis, i: u64, l: u64) -> Combination {
    let mut out: Combination = bits(i)
        .filter(|&b| k.contains(l | 1 << b))
        .map(|b| {
            let pos = below(i, b) as i64; // k − 1
            (
                basis.get(i & !(1 << b), l | 1 << b).expect("basis is closed"),
                parity_sign(pos),
            )
        })
        .collect();
    out.sort_unstable();
    out
}

/// d(s_I t_L) = Σ_k (−1)^{r+1} s_{I∖i_k} t_{L+i_k} with r = #{l ∈ L : l < i_k}.
pub(crate) fn bk_differential(k: &SimplicialComplex, basis: &PairBasis, i: u64, l: u64) -> Combination {
    let mut out: Combination = bits(i)
        .filter(|&b| k.contains(l | 1 << b))
        .map(|b| {
            let r = below(l, b) as i64;
            (
                basis.get(i & !(1 << b), l | 1 << b).expect("basis is closed"),
                parity_sign(r + 1),
            )
        })
        .collect();
    out.sort_unstable();
    out
}

/// ω_I y_L · ω_{I'} y_{L'} in R̄(K): zero unless all four index sets are pairwise compatible
/// and L ∪ L' ∈ K; the sign comes from merging the ω's.
pub(crate) fn rbar_product_pair(k: &SimplicialComplex, a: (u64, u64), b: (u64, u64)) -> Option<(u64, u64, i64)> {
    let ((i, l), (i2, l2)) = (a, b);
    if i & i2 != 0 || l & l2 != 0 || i & l2 != 0 || l & i2 != 0 || !k.contains(l | l2) {
        return None;
    }
    Some((i | i2, l | l2, parity_sign(inversions(i, i2))))
}

/// s_I t_L · s_{I'} t_{L'} in B(K) by the per-index table s·s=s, t·s=t, s·t=0, t·t=0,
/// with the Koszul sign of interleaving the t's.
pub(crate) fn bk_product_pair(k: &SimplicialComplex, a: (u64, u64), b: (u64, u64)) -> Option<(u64, u64, i64)> {
    let ((i, l), (i2, l2)) = (a, b);
    if l2 & (i | l) != 0 {
        return None;
    }
    let l_out = l | l2;
    if !k.contains(l_out) {
        return None;
    }
    let i_out = (i | i2) & !l;
    Some((i_out, l_out, parity_sign(inversions(l, l2))))
}

fn table(
    k: &SimplicialComplex,
    basis: &PairBasis,
    rule: fn(&SimplicialComplex, (u64, u64), (u64, u64)) -> Option<(u64, u64, i64)>,
) -> ProductTable {
    ProductTable::from_fn(basis.len(), |a, b| {
        rule(k, basis.pairs[a], basis.pairs[b])
            .map(|(i, l, s)| vec![(basis.get(i, l).expect("product stays in the basis"), s)])
            .unwrap_or_default()
    })
}

pub fn build_rbar(k: &SimplicialComplex) -> MonomialComplex {
    let basis = PairBasis::new(k);
    let elements = basis.pairs.iter().map(|&(i, l)| pair_element('w', 'y', i, l)).collect();
    let d = basis
        .pairs
        .iter()
        .map(|&(i, l)| rbar_differential(k, &basis, i, l))
        .collect();
    MonomialComplex::new("rbar", elements, d, true)
        .expect("well-formed by construction")
        .with_unit(0)
}

/// The product of R̄(K); its Leibniz rule uses deg₁ signs.
pub fn rbar_product(k: &SimplicialComplex) -> ProductTable {
    table(k, &PairBasis::new(k), rbar_product_pair)
}

pub fn build_bk(k: &SimplicialComplex) -> (MonomialComplex, ProductTable) {
    let basis = PairBasis::new(k);
    let elements = basis.pairs.iter().map(|&(i, l)| pair_element('s', 't', i, l)).collect();
    let d = basis
        .pairs
        .iter()
        .map(|&(i, l)| bk_differential(k, &basis, i, l))
        .collect();
    let c = MonomialComplex::new("bk", elements, d, true)
        .expect("well-formed by construction")
        .with_unit(0);
    (c, table(k, &basis, bk_product_pair))
}

/// Parity of the inversions of the concatenation `I L`, as ±1.
pub fn epsilon(i: &[usize], l: &[usize]) -> Result<i64> {
    if let Some(v) = i.iter().find(|v| l.contains(v)) {
        return Err(Error::input(format!("index {v} appears in both I and L")));
    }
    let seq: Vec<usize> = i.iter().chain(l).copied().collect();
    let mut inv = 0u32;
    for (a, x) in seq.iter().enumerate() {
        for y in &seq[a + 1..] {
            if y < x {
                inv += 1;
            }
            if y == x {
                return Err(Error::input(format!("index {x} is repeated")));
            }
        }
    }
    Ok(parity_sign(inv))
}

/// ε for masks, assuming disjointness: only cross pairs (x ∈ I, y ∈ L, y < x) invert.
pub(crate) fn epsilon_mask(i: u64, l: u64) -> i64 {
    parity_sign(inversions(i, l))
}

/// A basis bijection with a sign per element: source index `n` goes to `sign · target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedBasisMap {
    pub entries: Vec<(usize, i64)>,
}

impl SignedBasisMap {
    pub fn apply(&self, c: &[(usize, i64)]) -> Combination {
        let mut out: Combination = c
            .iter()
            .map(|&(i, v)| (self.entries[i].0, v * self.entries[i].1))
            .collect();
        out.sort_unstable();
        out
    }
}

/// f(ω_I y_L) = ε(I, L) s_I t_L.
pub fn map_f(k: &SimplicialComplex) -> SignedBasisMap {
    let basis = PairBasis::new(k);
    SignedBasisMap {
        entries: basis
            .pairs
            .iter()
            .enumerate()
            .map(|(n, &(i, l))| (n, epsilon_mask(i, l)))
            .collect(),
    }
}

/// f∘d_src = (−1)^{p(x)} d_dst∘f on every basis element x, with p = −deg₁.
pub fn check_signed_chain_map(
    check: &str,
    src: &MonomialComplex,
    dst: &MonomialComplex,
    f: &SignedBasisMap,
) -> CheckReport {
    let witness = (0..src.len()).find_map(|x| {
        let p = -src.element(x).bidegree.0;
        let lhs = f.apply(src.d(x));
        let rhs: Combination = dst
            .apply_d(&[f.entries[x]])
            .into_iter()
            .map(|(t, v)| (t, v * parity_sign(p)))
            .collect();
        (lhs != rhs).then(|| {
            format!(
                "x = {}: f(dx) = {}, (-1)^p d(f x) = {}",
                src.label(x),
                dst.format(&lhs),
                dst.format(&rhs)
            )
        })
    });
    CheckReport::from_witness(check, witness)
}

pub fn verify_f(k: &SimplicialComplex) -> CheckReport {
    let rbar = build_rbar(k);
    let (bk, _) = build_bk(k);
    check_signed_chain_map("f.sign_chain_map", &rbar, &bk, &map_f(k))
}

/// The subcomplex of each support J; errors if the differential does not preserve supports.
pub fn support_components(c: &MonomialComplex) -> Result<BTreeMap<u64, MonomialComplex>> {
    c.support_blocks()
        .into_iter()
        .map(|(j, idx)| {
            let verts: Vec<String> = mask_vertices(j).iter().map(usize::to_string).collect();
            let name = format!("{}[{}]", c.name(), verts.join(","));
            Ok((j, c.subcomplex(name, &idx)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{check_d_squared, check_leibniz, SignMode};
    use crate::linalg::Coeff;
    use crate::simplicial::catalog;

    fn idx(c: &MonomialComplex, label: &str) -> usize {
        c.index_of(label).unwrap_or_else(|| panic!("no basis element {label}"))
    }

    #[test]
    fn two_points_basis() {
        let k = catalog("points2").unwrap();
        let r = build_rbar(&k);
        assert_eq!(r.len(), 8);
        assert_eq!(basis_size(&k), 8);
    }

    #[test]
    fn rbar_differential_examples() {
        let k = catalog("simplex2").unwrap();
        let r = build_rbar(&k);
        let d = r.d(idx(&r, "w1w2"));
        assert_eq!(r.format(d), "w2y1 - w1y2");

        let pts = catalog("points2").unwrap();
        let r = build_rbar(&pts);
        assert!(r.d(idx(&r, "w1y2")).is_empty());
    }

    #[test]
    fn bk_examples() {
        let k = catalog("simplex2").unwrap();
        let (b, p) = build_bk(&k);
        assert_eq!(b.format(b.d(idx(&b, "s1s2"))), "-s2t1 - s1t2");
        let t12 = idx(&b, "t1t2");
        assert_eq!(p.get(idx(&b, "t2"), idx(&b, "t1")), &[(t12, -1)]);
        assert_eq!(p.get(idx(&b, "t1"), idx(&b, "t2")), &[(t12, 1)]);
        // index 2 carries s·t
        assert!(p.get(idx(&b, "s2t1"), idx(&b, "s1t2")).is_empty());
        assert_eq!(p.get(idx(&b, "s1"), idx(&b, "s1")), &[(idx(&b, "s1"), 1)]);
        assert_eq!(p.get(idx(&b, "t1"), idx(&b, "s1")), &[(idx(&b, "t1"), 1)]);
        assert!(p.get(idx(&b, "s1"), idx(&b, "t1")).is_empty());

        let pts = catalog("points2").unwrap();
        let (b, p) = build_bk(&pts);
        assert!(p.get(idx(&b, "t1"), idx(&b, "t2")).is_empty());
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(&[], &[1, 2, 3]).unwrap(), 1);
        assert_eq!(epsilon(&[2], &[1]).unwrap(), -1);
        assert_eq!(epsilon(&[1, 3], &[2]).unwrap(), -1);
        assert!(epsilon(&[1, 2], &[2]).is_err());
        for (i, l) in [(0b101u64, 0b010u64), (0b110, 0b001), (0b1000, 0b0111)] {
            let (iv, lv) = (mask_vertices(i), mask_vertices(l));
            assert_eq!(epsilon(&iv, &lv).unwrap(), epsilon_mask(i, l));
        }
    }

    #[test]
    fn f_examples() {
        let k = catalog("simplex2").unwrap();
        let r = build_rbar(&k);
        let (b, _) = build_bk(&k);
        let f = map_f(&k);
        assert_eq!(f.apply(&[(0, 1)]), vec![(0, 1)]);
        let x = idx(&r, "w2y1");
        assert_eq!(b.format(&f.apply(&[(x, 1)])), "-s2t1");
        let w12 = idx(&r, "w1w2");
        assert_eq!(b.format(&f.apply(r.d(w12))), "-s2t1 - s1t2");
        assert!(verify_f(&k).is_pass());
    }

    #[test]
    fn sign_modes() {
        let k = catalog("gon4").unwrap();
        let (b, p) = build_bk(&k);
        assert!(check_d_squared(&b).is_pass());
        assert!(check_leibniz(&b, &p, SignMode::TotalDegree).is_pass());
        let wrong = check_leibniz(&b, &p, SignMode::FirstDegree);
        assert!(wrong.is_fail());
        let r = build_rbar(&k);
        assert!(check_leibniz(&r, &rbar_product(&k), SignMode::FirstDegree).is_pass());
    }

    #[test]
    fn two_point_top_component() {
        let k = catalog("points2").unwrap();
        let comps = support_components(&build_rbar(&k)).unwrap();
        assert!(comps[&0].d(0).is_empty());
        let top = &comps[&0b11];
        let labels: Vec<&str> = top.basis().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, vec!["w1w2", "w2y1", "w1y2"]);
        let h = top.cohomology(Coeff::Z).unwrap();
        assert_eq!(h.ranks(), vec![0, 1]);
    }
}
