//! The Koszul complex L(ω) ⊗ SR⟨K⟩, Tor by second-degree truncation, the contracting
//! homotopy of the resolution E = L(ω) ⊗ k⟨y⟩, and the homotopy on the ideal (y_i², ω_i y_i).
//!
//! The y's commute strictly; every sign is governed by the ω's.

use std::collections::HashMap;

use crate::dga::{parity_sign, Accumulator, BasisElement, Combination, MonomialComplex};
use crate::error::{Error, Result};
use crate::linalg::{BigradedCohomology, Coeff};
use crate::real_mac::{below, bits, build_rbar, submasks};
use crate::report::CheckReport;
use crate::simplicial::{full_mask, SimplicialComplex};

/// ω_I ⊗ y^a.
pub type KoszulMonomial = (u64, Vec<u32>);

/// Default truncation: two slices above the top of R̄(K).
pub fn default_cap(m: usize) -> usize {
    m + 2
}

fn support_of(a: &[u32]) -> u64 {
    a.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// All exponent vectors on m variables of total degree `d`.
fn exponent_vectors(m: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(m: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == m {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            go(m, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(m, d, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Monomials of SR⟨K⟩ per second degree 0..=N, each list in decreasing lexicographic order
/// of exponent vectors (so y₁³ precedes y₂³).
pub fn sr_basis(k: &SimplicialComplex, cap: usize) -> Vec<Vec<Vec<u32>>> {
    (0..=cap as u32)
        .map(|d| {
            exponent_vectors(k.m(), d)
                .into_iter()
                .filter(|a| k.contains(support_of(a)))
                .collect()
        })
        .collect()
}

pub fn monomial_label(i: u64, a: &[u32]) -> String {
    if i == 0 && a.iter().all(|&e| e == 0) {
        return "1".into();
    }
    let mut s = String::new();
    for b in bits(i) {
        s.push_str(&format!("w{}", b + 1));
    }
    for (j, &e) in a.iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(&format!("y{}", j + 1)),
            _ => s.push_str(&format!("y{}^{e}", j + 1)),
        }
    }
    s
}

fn element(x: &KoszulMonomial) -> BasisElement {
    let p = x.0.count_ones() as i32;
    let q = x.1.iter().sum::<u32>() as i32;
    BasisElement::new(monomial_label(x.0, &x.1), (-p, p + q), x.0 | support_of(&x.1))
}

/// ω_I ⊗ y^a with |I| + |a| ≤ N, optionally with supp(a) ∈ K; ordered by deg₂, then I, then a.
fn monomials(m: usize, k: Option<&SimplicialComplex>, cap: usize) -> Vec<KoszulMonomial> {
    let subsets = submasks(full_mask(m));
    let per_degree: Vec<Vec<Vec<u32>>> = (0..=cap as u32)
        .map(|d| {
            exponent_vectors(m, d)
                .into_iter()
                .filter(|a| k.is_none_or(|k| k.contains(support_of(a))))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for q in 0..=cap {
        for &i in &subsets {
            let p = i.count_ones() as usize;
            if p > q {
                continue;
            }
            for a in &per_degree[q - p] {
                out.push((i, a.clone()));
            }
        }
    }
    out
}

/// d(ω_I ⊗ y^a) = Σ_k (−1)^{k+1} ω_{I∖i_k} ⊗ y_{i_k} y^a; with K given, terms whose support
/// leaves K vanish.
pub fn koszul_d(k: Option<&SimplicialComplex>, x: &KoszulMonomial) -> Vec<(KoszulMonomial, i64)> {
    let (i, a) = x;
    bits(*i)
        .filter_map(|b| {
            let mut a2 = a.clone();
            a2[b as usize] += 1;
            if let Some(k) = k {
                if !k.contains(support_of(&a2)) {
                    return None;
                }
            }
            Some(((i & !(1 << b), a2), parity_sign(below(*i, b))))
        })
        .collect()
}

fn assemble(
    name: &str,
    monos: Vec<KoszulMonomial>,
    d: impl Fn(&KoszulMonomial) -> Vec<(KoszulMonomial, i64)>,
) -> Result<(MonomialComplex, HashMap<KoszulMonomial, usize>)> {
    let index: HashMap<KoszulMonomial, usize> = monos.iter().cloned().enumerate().map(|(n, x)| (x, n)).collect();
    let mut differential = Vec::with_capacity(monos.len());
    for x in &monos {
        let mut acc = Accumulator::new();
        for (y, c) in d(x) {
            let t = *index.get(&y).ok_or_else(|| {
                Error::structural(format!("{name}: d({}) leaves the basis", monomial_label(x.0, &x.1)))
            })?;
            acc.add(t, c);
        }
        differential.push(acc.finish());
    }
    let basis = monos.iter().map(element).collect();
    let c = MonomialComplex::new(name, basis, differential, true)?;
    let c = match index.get(&(0, vec![0; monos.first().map_or(0, |x| x.1.len())])) {
        Some(&u) => c.with_unit(u),
        None => c,
    };
    Ok((c, index))
}

/// L(ω) ⊗ SR⟨K⟩ truncated at deg₂ ≤ N.
pub fn build_koszul(k: &SimplicialComplex, cap: usize) -> MonomialComplex {
    assemble("koszul", monomials(k.m(), Some(k), cap), |x| koszul_d(Some(k), x))
        .expect("closed under d")
        .0
}

/// Tor over the polynomial-type algebra, per bidegree with deg₂ ≤ N.
pub fn tor(k: &SimplicialComplex, cap: usize, coeff: Coeff) -> Result<BigradedCohomology> {
    build_koszul(k, cap).bigraded_cohomology(coeff)
}

/// A degree (−1, 0) operator on a finite complex.
#[derive(Clone, Debug)]
pub struct HomotopyOperator {
    pub complex: MonomialComplex,
    /// s of each basis element.
    pub s: Vec<Combination>,
}

fn operator(
    complex: MonomialComplex,
    index: &HashMap<KoszulMonomial, usize>,
    monos: &[KoszulMonomial],
    s: impl Fn(&KoszulMonomial) -> Option<(KoszulMonomial, i64)>,
) -> Result<HomotopyOperator> {
    let mut images = Vec::with_capacity(monos.len());
    for x in monos {
        let img = match s(x) {
            None => Vec::new(),
            Some((y, c)) => vec![(
                *index
                    .get(&y)
                    .ok_or_else(|| Error::structural(format!("s({}) leaves the basis", monomial_label(x.0, &x.1))))?,
                c,
            )],
        };
        images.push(img);
    }
    Ok(HomotopyOperator { complex, s: images })
}

impl HomotopyOperator {
    pub fn apply(&self, c: &[(usize, i64)]) -> Combination {
        let mut acc = Accumulator::new();
        for &(i, v) in c {
            acc.add_all(&self.s[i], v);
        }
        acc.finish()
    }

    /// d s(x) + sign · s d(x) for one basis element.
    pub fn commutator(&self, x: usize, sign: i64) -> Combination {
        let mut acc = Accumulator::new();
        acc.add_all(&self.complex.apply_d(&self.s[x]), 1);
        acc.add_all(&self.apply(self.complex.d(x)), sign);
        acc.finish()
    }

    /// Checks `d s + sign · s d = id − π` on every basis element, where π is the projection
    /// onto `fixed` (the unit for the resolution; nothing for the ideal). Equality is taken
    /// in the coefficient ring, so over ℤ/p coefficients are compared mod p.
    pub fn check(&self, check: &str, sign: i64, fixed: Option<usize>, coeff: Coeff) -> CheckReport {
        let c = &self.complex;
        let witness = (0..c.len()).find_map(|x| {
            let lhs = self.commutator(x, sign);
            let rhs: Combination = if Some(x) == fixed { Vec::new() } else { vec![(x, 1)] };
            let diff = crate::dga::difference(&lhs, &rhs);
            let vanishes = match coeff {
                Coeff::Zp(p) => diff.iter().all(|&(_, v)| v.rem_euclid(p as i64) == 0),
                _ => diff.is_empty(),
            };
            (!vanishes).then(|| format!("x = {}: {} ≠ {}", c.label(x), c.format(&lhs), c.format(&rhs)))
        });
        CheckReport::from_witness(check, witness)
    }
}

/// s(ω_I y^a): with k the least index in I or with a_k > 0, zero if k ∈ I and
/// ω_k ω_I y^{a − e_k} otherwise. No sign arises since k precedes every index of I.
fn resolution_s(x: &KoszulMonomial) -> Option<(KoszulMonomial, i64)> {
    let (i, a) = x;
    let k = (0..a.len()).find(|&j| i >> j & 1 == 1 || a[j] > 0)?;
    if i >> k & 1 == 1 {
        return None;
    }
    let mut a2 = a.clone();
    a2[k] -= 1;
    Some(((i | 1 << k, a2), 1))
}

/// The contracting homotopy of E = L(ω_1..ω_m) ⊗ k⟨y_1..y_m⟩ truncated at deg₂ ≤ N.
pub fn homotopy_s(m: usize, cap: usize) -> HomotopyOperator {
    let monos = monomials(m, None, cap);
    let (c, index) = assemble("E", monos.clone(), |x| koszul_d(None, x)).expect("closed under d");
    operator(c, &index, &monos, resolution_s).expect("s preserves deg₂")
}

/// `d s + s d = id − ηε` on all of the truncation (both operators keep deg₂, so no slice is cut).
pub fn check_homotopy_s(m: usize, cap: usize) -> CheckReport {
    let h = homotopy_s(m, cap);
    let unit = h.complex.unit();
    h.check(&format!("homotopy.resolution.m{m}.n{cap}"), 1, unit, Coeff::Z)
        .with_note(format!("exhaustive on deg2 <= {cap}"))
}

fn in_ideal(x: &KoszulMonomial) -> bool {
    ideal_index(x).is_some()
}

/// Least i with y_i² | x or ω_i y_i | x.
fn ideal_index(x: &KoszulMonomial) -> Option<usize> {
    let (i, a) = x;
    (0..a.len()).find(|&j| a[j] >= 2 || (a[j] >= 1 && i >> j & 1 == 1))
}

/// s(x) = ω_{i(x)} · x / y_{i(x)}.
fn ideal_s(x: &KoszulMonomial) -> Option<(KoszulMonomial, i64)> {
    let j = ideal_index(x)?;
    let (i, a) = x;
    if i >> j & 1 == 1 {
        return None;
    }
    let mut a2 = a.clone();
    a2[j] -= 1;
    Some(((i | 1 << j, a2), parity_sign(below(*i, j as u32))))
}

/// The homotopy on the ideal (y_i², ω_i y_i) ⊂ L(ω) ⊗ SR⟨K⟩, truncated at deg₂ ≤ N.
pub fn ideal_homotopy(k: &SimplicialComplex, cap: usize) -> HomotopyOperator {
    let monos: Vec<KoszulMonomial> = monomials(k.m(), Some(k), cap).into_iter().filter(in_ideal).collect();
    let (c, index) = assemble("ideal", monos.clone(), |x| koszul_d(Some(k), x)).expect("the ideal is a subcomplex");
    operator(c, &index, &monos, ideal_s).expect("s preserves the ideal")
}

/// Which combination of `ds` and `sd` is compared with the identity on the ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealIdentity {
    /// ds − sd = id
    Difference,
    /// ds + sd = id
    Sum,
}

pub fn check_ideal_homotopy(k: &SimplicialComplex, cap: usize, form: IdealIdentity, coeff: Coeff) -> CheckReport {
    let h = ideal_homotopy(k, cap);
    let (sign, name) = match form {
        IdealIdentity::Difference => (-1, "difference"),
        IdealIdentity::Sum => (1, "sum"),
    };
    h.check(&format!("homotopy.ideal.{name}.{coeff}"), sign, None, coeff)
        .with_note(format!("exhaustive on deg2 <= {cap}"))
}

/// Tor of the Koszul complex against H(R̄(K)) per bidegree for deg₂ ≤ min(N, m), and
/// vanishing of Tor for m < deg₂ ≤ N.
pub fn quotient_quasi_iso_check(k: &SimplicialComplex, cap: usize, coeff: Coeff) -> Result<Vec<CheckReport>> {
    let m = k.m() as i32;
    let n = cap as i32;
    let tor = tor(k, cap, coeff)?;
    let rbar = build_rbar(k).bigraded_cohomology(coeff)?;
    let low = tor.filter(|(_, q)| q <= m.min(n));
    let rbar_low = rbar.filter(|(_, q)| q <= m.min(n));
    let matched = CheckReport::from_witness(
        format!("quotient.match.{coeff}"),
        low.first_difference(&rbar_low)
            .map(|d| format!("bidegree {d:?}: Tor {} vs R̄ {}", low.get(d), rbar_low.get(d))),
    )
    .with_note(format!("truncated verification at deg2 <= {cap}"));
    let vanishing = if n < m {
        CheckReport::skipped(
            format!("quotient.vanishing.{coeff}"),
            "truncated below m: skipped vanishing assertion",
        )
    } else {
        let high = tor.filter(|(_, q)| q > m);
        let witness = high
            .degrees()
            .next()
            .map(|d| format!("Tor is {} in bidegree {d:?}", high.get(d)));
        CheckReport::from_witness(format!("quotient.vanishing.{coeff}"), witness)
            .with_note(format!("checked for {} < deg2 <= {cap}", m))
    };
    Ok(vec![matched, vanishing])
}
