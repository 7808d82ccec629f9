//! Exhaustive structural checks. Each returns a [`CheckReport`] whose witness names the
//! first offending basis element or pair in basis order.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{difference, parity_sign, Accumulator, MonomialComplex, ProductTable};
use crate::report::CheckReport;

/// Which degree governs the sign in `d(ab) = d(a)b ± a d(b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    /// (−1)^{deg₁ a}
    FirstDegree,
    /// (−1)^{deg₁ a + deg₂ a}
    TotalDegree,
}

impl SignMode {
    pub fn id(self) -> &'static str {
        match self {
            SignMode::FirstDegree => "first_degree",
            SignMode::TotalDegree => "total_degree",
        }
    }
}

fn id(c: &MonomialComplex, check: &str) -> String {
    format!("{}.{check}", c.name())
}

pub fn check_d_squared(c: &MonomialComplex) -> CheckReport {
    let witness = (0..c.len()).into_par_iter().find_map_first(|i| {
        let dd = c.apply_d(c.d(i));
        (!dd.is_empty()).then(|| format!("d(d({})) = {}", c.label(i), c.format(&dd)))
    });
    CheckReport::from_witness(id(c, "d_squared"), witness)
}

/// d raises deg₁ by one and keeps deg₂ (or, for a non-bigraded complex, raises total degree by one);
/// every basis element has deg₁ ≤ 0 ≤ deg₂.
pub fn check_bidegree(c: &MonomialComplex) -> CheckReport {
    let witness = (0..c.len()).find_map(|i| {
        let (p, q) = c.element(i).bidegree;
        if p > 0 || q < 0 {
            return Some(format!("{} has bidegree ({p},{q})", c.label(i)));
        }
        c.d(i).iter().find_map(|&(t, _)| {
            let (tp, tq) = c.element(t).bidegree;
            let ok = if c.is_bigraded() {
                (tp, tq) == (p + 1, q)
            } else {
                tp + tq == p + q + 1
            };
            (!ok).then(|| format!("d({}) ∋ {} of bidegree ({tp},{tq})", c.label(i), c.label(t)))
        })
    });
    CheckReport::from_witness(id(c, "bidegree"), witness)
}

pub fn check_support(c: &MonomialComplex) -> CheckReport {
    let witness = (0..c.len()).find_map(|i| {
        let s = c.element(i).support;
        c.d(i)
            .iter()
            .find(|&&(t, _)| c.element(t).support != s)
            .map(|&(t, _)| format!("d({}) ∋ {} with a different support", c.label(i), c.label(t)))
    });
    CheckReport::from_witness(id(c, "support"), witness)
}

/// d(ab) = d(a)b + (−1)^{ε(a)} a d(b) on every ordered basis pair. For fixed a only the b
/// where one of ab, d(a)b, a d(b) can be nonzero are expanded.
pub fn check_leibniz(c: &MonomialComplex, p: &ProductTable, mode: SignMode) -> CheckReport {
    let n = c.len();
    let mut preimages: Vec<Vec<usize>> = vec![Vec::new(); n];
    for b in 0..n {
        for &(u, _) in c.d(b) {
            preimages[u].push(b);
        }
    }
    let witness = (0..n).into_par_iter().find_map_first(|a| {
        let e = c.element(a);
        let sign = match mode {
            SignMode::FirstDegree => parity_sign(e.bidegree.0),
            SignMode::TotalDegree => parity_sign(e.total_degree()),
        };
        let da = c.d(a);
        let mut candidates = BTreeSet::new();
        for (b, _) in p.row(a) {
            candidates.insert(*b);
            candidates.extend(preimages[*b].iter().copied());
        }
        for &(t, _) in da {
            candidates.extend(p.row(t).iter().map(|(b, _)| *b));
        }
        candidates.into_iter().find_map(|b| {
            let lhs = c.apply_d(p.get(a, b));
            let mut rhs = Accumulator::new();
            rhs.add_all(&p.multiply(da, &[(b, 1)]), 1);
            rhs.add_all(&p.multiply(&[(a, 1)], c.d(b)), sign);
            let rhs = rhs.finish();
            (lhs != rhs).then(|| {
                format!(
                    "a = {}, b = {}: d(ab) = {}, d(a)b ± a d(b) = {}",
                    c.label(a),
                    c.label(b),
                    c.format(&lhs),
                    c.format(&rhs)
                )
            })
        })
    });
    CheckReport::from_witness(id(c, &format!("leibniz.{}", mode.id())), witness)
}

/// (ab)x = a(bx) on every basis triple. Only x with bx ≠ 0 or tx ≠ 0 for some term t of ab
/// can give a nonzero side; when ab = 0 only those x where bx meets a right factor of a are expanded.
pub fn check_associativity(c: &MonomialComplex, p: &ProductTable) -> CheckReport {
    let n = c.len();
    let describe = |a: usize, b: usize, x: usize, left: &[(usize, i64)], right: &[(usize, i64)]| {
        format!(
            "({}·{})·{} = {} but {}·({}·{}) = {}",
            c.label(a),
            c.label(b),
            c.label(x),
            c.format(left),
            c.label(a),
            c.label(b),
            c.label(x),
            c.format(right)
        )
    };
    let witness = (0..n).into_par_iter().find_map_first(|a| {
        let mut right_factor = vec![false; n];
        for (u, _) in p.row(a) {
            right_factor[*u] = true;
        }
        (0..n).find_map(|b| {
            let ab = p.get(a, b);
            if ab.is_empty() {
                return p.row(b).iter().find_map(|(x, bx)| {
                    if !bx.iter().any(|&(u, _)| right_factor[u]) {
                        return None;
                    }
                    let right = p.multiply(&[(a, 1)], bx);
                    (!right.is_empty()).then(|| describe(a, b, *x, &[], &right))
                });
            }
            let mut candidates: Vec<usize> = p.row(b).iter().map(|(x, _)| *x).collect();
            for &(t, _) in ab {
                candidates.extend(p.row(t).iter().map(|(x, _)| *x));
            }
            candidates.sort_unstable();
            candidates.dedup();
            candidates.into_iter().find_map(|x| {
                let left = p.multiply(ab, &[(x, 1)]);
                let right = p.multiply(&[(a, 1)], p.get(b, x));
                (left != right).then(|| describe(a, b, x, &left, &right))
            })
        })
    });
    CheckReport::from_witness(id(c, "associativity"), witness)
}

pub fn check_unit(c: &MonomialComplex, p: &ProductTable) -> CheckReport {
    let Some(u) = c.unit() else {
        return CheckReport::skipped(id(c, "unit"), "no unit element");
    };
    let witness = (0..c.len()).find_map(|a| {
        let want = vec![(a, 1)];
        if p.get(u, a) != want.as_slice() {
            Some(format!("1·{} = {}", c.label(a), c.format(p.get(u, a))))
        } else if p.get(a, u) != want.as_slice() {
            Some(format!("{}·1 = {}", c.label(a), c.format(p.get(a, u))))
        } else {
            None
        }
    });
    CheckReport::from_witness(id(c, "unit"), witness)
}

/// Supports union under the product, and degrees add: bidegrees in first-degree mode, total
/// degrees in total-degree mode (idempotent generators such as s·s = s only respect the latter).
pub fn check_product_grading(c: &MonomialComplex, p: &ProductTable, mode: SignMode) -> CheckReport {
    let witness = (0..c.len()).find_map(|a| {
        let ea = c.element(a);
        p.row(a).iter().find_map(|(b, prod)| {
            let eb = c.element(*b);
            let want = (ea.bidegree.0 + eb.bidegree.0, ea.bidegree.1 + eb.bidegree.1);
            prod.iter().find_map(|&(t, _)| {
                let et = c.element(t);
                let degree_ok = match mode {
                    SignMode::FirstDegree => et.bidegree == want,
                    SignMode::TotalDegree => et.total_degree() == want.0 + want.1,
                };
                (!degree_ok || et.support != ea.support | eb.support)
                    .then(|| format!("{}·{} ∋ {}", c.label(a), c.label(*b), c.label(t)))
            })
        })
    });
    CheckReport::from_witness(id(c, "product_grading"), witness)
}

/// Graded commutativity `ab = (−1)^{|a||b|} ba` in total degree on basis pairs.
/// Not a requirement for the noncommutative models; used to report commutativity.
pub fn commutator_witness(c: &MonomialComplex, p: &ProductTable) -> Option<String> {
    (0..c.len()).find_map(|a| {
        (0..c.len()).find_map(|b| {
            let s = parity_sign(c.element(a).total_degree() * c.element(b).total_degree());
            let diff = difference(p.get(a, b), &super::scale(p.get(b, a), s));
            (!diff.is_empty()).then(|| format!("{}, {}", c.label(a), c.label(b)))
        })
    })
}

/// d², bidegree and support for any complex; with a product also Leibniz, associativity,
/// unit and product grading.
pub fn structural_suite(c: &MonomialComplex, p: Option<(&ProductTable, SignMode)>) -> Vec<CheckReport> {
    let mut out = vec![check_d_squared(c), check_bidegree(c), check_support(c)];
    if let Some((p, mode)) = p {
        out.push(check_leibniz(c, p, mode));
        out.push(check_associativity(c, p));
        out.push(check_unit(c, p));
        out.push(check_product_grading(c, p, mode));
    }
    out
}
