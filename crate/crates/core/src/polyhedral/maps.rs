//! Comparison maps between the polyhedral models and the checks built on them:
//! h: C → R, g: R → C, the signed map f_X: C → B, the suspension coincidence of the
//! two products, and oracle comparisons of cohomology.

use std::collections::HashMap;

use super::models::{build_b_dga, build_bxk, build_cxk, build_rxk, cxk_product, GlobalGenerators, TensorBasis};
use super::spaces::Space;
use crate::dga::{Accumulator, Combination, MonomialComplex};
use crate::error::Result;
use crate::linalg::{Coeff, CohomologyResult};
use crate::real_mac::{bits, check_signed_chain_map, epsilon_mask, SignedBasisMap};
use crate::report::CheckReport;
use crate::simplicial::{splitting_oracle, ShiftMode, SimplicialComplex};

/// A linear map given on basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMap {
    pub images: Vec<Combination>,
}

impl BasisMap {
    pub fn apply(&self, c: &[(usize, i64)]) -> Combination {
        let mut acc = Accumulator::new();
        for &(i, v) in c {
            acc.add_all(&self.images[i], v);
        }
        acc.finish()
    }

    pub fn compose(&self, after: &BasisMap) -> BasisMap {
        BasisMap {
            images: self.images.iter().map(|c| after.apply(c)).collect(),
        }
    }
}

/// map(d x) = d(map x) on every source basis element.
pub fn check_chain_map(check: &str, src: &MonomialComplex, dst: &MonomialComplex, map: &BasisMap) -> CheckReport {
    let witness = (0..src.len()).find_map(|x| {
        let lhs = map.apply(src.d(x));
        let rhs = dst.apply_d(&map.images[x]);
        (lhs != rhs).then(|| {
            format!(
                "x = {}: map(dx) = {}, d(map x) = {}",
                src.label(x),
                dst.format(&lhs),
                dst.format(&rhs)
            )
        })
    });
    CheckReport::from_witness(check, witness)
}

/// The two models and the maps between them.
pub struct SummandMaps {
    pub c: MonomialComplex,
    pub r: MonomialComplex,
    pub h: BasisMap,
    pub g: BasisMap,
}

/// h(ω_I y_L ⊗ h) = (ub over I)(b over L) with the chosen generators; g inverts h on its image
/// and kills every monomial whose vertex list repeats.
pub fn maps_h_g(k: &SimplicialComplex, spaces: &[Space]) -> Result<SummandMaps> {
    let c = build_cxk(k, spaces)?;
    let basis = TensorBasis::new(k, spaces)?;
    let (r, keys, gens) = build_rxk(k, spaces)?;
    let r_index: HashMap<(u64, u64), usize> = keys.iter().enumerate().map(|(n, &key)| (key, n)).collect();

    let to_r = |i: u64, l: u64, h: &[usize]| -> (u64, u64) {
        let (mut u, mut b) = (0u64, 0u64);
        for (v, &g) in bits(i | l).zip(h) {
            let bit = 1u64 << gens.position(v as usize, g);
            if i >> v & 1 == 1 {
                u |= bit;
            } else {
                b |= bit;
            }
        }
        (u, b)
    };
    let h_images = basis
        .keys
        .iter()
        .map(|(i, l, h)| vec![(r_index[&to_r(*i, *l, h)], 1)])
        .collect();
    let g_images = keys
        .iter()
        .map(|&(u, b)| from_r(&gens, &basis, u, b).map_or_else(Vec::new, |n| vec![(n, 1)]))
        .collect();
    Ok(SummandMaps {
        c,
        r,
        h: BasisMap { images: h_images },
        g: BasisMap { images: g_images },
    })
}

fn from_r(gens: &GlobalGenerators, basis: &TensorBasis, u: u64, b: u64) -> Option<usize> {
    if gens.repeats(u | b) {
        return None;
    }
    let (i, l) = (gens.vertices(u), gens.vertices(b));
    let h: Vec<usize> = bits(u | b).map(|g| gens.list[g as usize].1).collect();
    basis.get(&(i, l, h))
}

/// "h.chain_map", "g.chain_map" and "g_after_h.identity".
pub fn verify_h_g(k: &SimplicialComplex, spaces: &[Space]) -> Result<Vec<CheckReport>> {
    let maps = maps_h_g(k, spaces)?;
    let gh = maps.h.compose(&maps.g);
    let identity = (0..maps.c.len()).find_map(|x| {
        (gh.images[x] != [(x, 1)]).then(|| format!("g(h({})) = {}", maps.c.label(x), maps.c.format(&gh.images[x])))
    });
    Ok(vec![
        check_chain_map("h.chain_map", &maps.c, &maps.r, &maps.h),
        check_chain_map("g.chain_map", &maps.r, &maps.c, &maps.g),
        CheckReport::from_witness("g_after_h.identity", identity),
    ])
}

/// f_X(ω_I y_L ⊗ h) = ε(I, L) s_I t_L ⊗ h; C and B share their basis order.
pub fn map_f_x(k: &SimplicialComplex, spaces: &[Space]) -> Result<SignedBasisMap> {
    let basis = TensorBasis::new(k, spaces)?;
    Ok(SignedBasisMap {
        entries: basis
            .keys
            .iter()
            .enumerate()
            .map(|(n, (i, l, _))| (n, epsilon_mask(*i, *l)))
            .collect(),
    })
}

/// f_X d_C = (−1)^{|I|} d_B f_X on every basis element.
pub fn verify_f_x(k: &SimplicialComplex, spaces: &[Space]) -> Result<CheckReport> {
    let c = build_cxk(k, spaces)?;
    let (b, _) = build_bxk(k, spaces)?;
    Ok(check_signed_chain_map(
        "f_x.sign_chain_map",
        &c,
        &b,
        &map_f_x(k, spaces)?,
    ))
}

/// First basis pair with overlapping supports and a nonzero B(X,K) product.
pub fn overlap_witness(k: &SimplicialComplex, spaces: &[Space]) -> Result<Option<String>> {
    let (b, p) = build_bxk(k, spaces)?;
    Ok((0..b.len()).find_map(|x| {
        p.row(x).iter().find_map(|(y, prod)| {
            (b.element(x).support & b.element(*y).support != 0)
                .then(|| format!("{}·{} = {}", b.label(x), b.label(*y), b.format(prod)))
        })
    }))
}

/// For suspensions: overlapping-support products vanish in B(X,K), and on disjoint supports
/// f_X(x)·f_X(y) = ±f_X(x·y). The note records how many nonzero pairs needed each sign.
/// For other inputs the check is reported as not applicable.
pub fn suspension_coincidence_check(k: &SimplicialComplex, spaces: &[Space]) -> Result<Vec<CheckReport>> {
    if let Some(s) = spaces.iter().find(|s| !s.is_suspension) {
        let note = match overlap_witness(k, spaces)? {
            Some(w) => format!(
                "not applicable: {} is not a suspension; nonzero overlapping product {w}",
                s.name
            ),
            None => format!("not applicable: {} is not a suspension", s.name),
        };
        return Ok(vec![CheckReport::skipped("suspension.coincidence", note)]);
    }
    let overlap = CheckReport::from_witness("suspension.overlap_zero", overlap_witness(k, spaces)?);

    let c = build_cxk(k, spaces)?;
    let pc = cxk_product(k, spaces)?;
    let (_, pb) = build_bxk(k, spaces)?;
    let f = map_f_x(k, spaces)?;
    let (mut same, mut opposite) = (0usize, 0usize);
    let mut witness = None;
    'pairs: for x in 0..c.len() {
        for y in 0..c.len() {
            if c.element(x).support & c.element(y).support != 0 {
                continue;
            }
            let via_b = pb.multiply(&[f.entries[x]], &[f.entries[y]]);
            let via_c = f.apply(pc.get(x, y));
            if via_b.is_empty() && via_c.is_empty() {
                continue;
            }
            if via_b == via_c {
                same += 1;
            } else if via_b == crate::dga::scale(&via_c, -1) {
                opposite += 1;
            } else {
                witness = Some(format!(
                    "{}, {}: f(x)f(y) = {}, f(xy) = {}",
                    c.label(x),
                    c.label(y),
                    c.format(&via_b),
                    c.format(&via_c)
                ));
                break 'pairs;
            }
        }
    }
    let matched = CheckReport::from_witness("suspension.disjoint_match", witness)
        .with_note(format!("{same} pairs agree, {opposite} pairs differ by a sign"));
    Ok(vec![overlap, matched])
}

/// The oracle for given spaces: ⊕_J H̃*(ΣK_J) ⊗ H^J.
pub fn polyhedral_oracle(k: &SimplicialComplex, spaces: &[Space], coeff: Coeff) -> Result<CohomologyResult> {
    let mode = ShiftMode::Tensor(spaces.iter().map(|s| s.degrees.clone()).collect());
    splitting_oracle(k, coeff, &mode)
}

pub(crate) fn compare(check: String, got: &CohomologyResult, want: &CohomologyResult, what: &str) -> CheckReport {
    let witness = got
        .first_difference(want)
        .map(|d| format!("degree {d}: {what} {} vs oracle {}", got.get(d), want.get(d)));
    CheckReport::from_witness(check, witness)
}

/// H*(B(X,K)) and H*(C(X,K)) against the oracle, per degree with torsion.
pub fn oracle_compare_cxx(k: &SimplicialComplex, spaces: &[Space], coeff: Coeff) -> Result<Vec<CheckReport>> {
    let want = polyhedral_oracle(k, spaces, coeff)?;
    let b = build_bxk(k, spaces)?.0.cohomology(coeff)?;
    let c = build_cxk(k, spaces)?.cohomology(coeff)?;
    Ok(vec![
        compare(format!("oracle.bxk.{coeff}"), &b, &want, "B(X,K)"),
        compare(format!("oracle.cxk.{coeff}"), &c, &want, "C(X,K)"),
    ])
}

/// H*(B(A,K)) against ⊕_J H̃*(ΣK_J) ⊗ H^J with H^J built from the cohomology of each A_i.
/// Skipped when some H̃*(A_i) has torsion, which the tensor oracle does not model.
pub fn b_dga_oracle_check(k: &SimplicialComplex, spaces: &[Space], coeff: Coeff) -> Result<CheckReport> {
    let id = format!("oracle.b_dga.{coeff}");
    let mut degrees = Vec::with_capacity(spaces.len());
    for s in spaces {
        let h = s.reduced_cohomology(Coeff::Z)?;
        if h.iter().any(|(_, g)| !g.torsion.is_empty()) {
            return Ok(CheckReport::skipped(id, format!("H̃*({}) has torsion", s.name)));
        }
        degrees.push(
            h.iter()
                .flat_map(|(&d, g)| std::iter::repeat_n(d, g.free_rank))
                .collect(),
        );
    }
    let want = splitting_oracle(k, coeff, &ShiftMode::Tensor(degrees))?;
    let got = build_b_dga(k, spaces)?.0.cohomology(coeff)?;
    Ok(compare(id, &got, &want, "B(A,K)"))
}

/// H*(C) is a summand of H*(R): per degree the free rank of C is at most that of R and
/// the torsion of C occurs in R. With `equal`, the groups must coincide.
/// Returns the report and whether R is strictly larger in some degree.
pub fn rxk_summand_check(
    k: &SimplicialComplex,
    spaces: &[Space],
    coeff: Coeff,
    equal: bool,
) -> Result<(CheckReport, bool)> {
    let c = build_cxk(k, spaces)?.cohomology(coeff)?;
    let r = build_rxk(k, spaces)?.0.cohomology(coeff)?;
    let mut strict = false;
    let mut witness = None;
    for d in c
        .degrees()
        .chain(r.degrees())
        .collect::<std::collections::BTreeSet<_>>()
    {
        let (gc, gr) = (c.get(d), r.get(d));
        strict |= gr != gc;
        let mut rest = gr.torsion.clone();
        let fits = gc.free_rank <= gr.free_rank
            && gc.torsion.iter().all(|t| match rest.iter().position(|x| x == t) {
                Some(n) => {
                    rest.remove(n);
                    true
                }
                None => false,
            });
        if !fits || (equal && gc != gr) {
            witness = Some(format!("degree {d}: C(X,K) {gc} vs R(X,K) {gr}"));
            break;
        }
    }
    let check = if equal { "rxk.equal" } else { "rxk.summand" };
    Ok((CheckReport::from_witness(format!("{check}.{coeff}"), witness), strict))
}

/// With zero coefficient differentials B(A,K) is B(X,K): basis, differential and product agree.
pub fn b_dga_reduction_check(k: &SimplicialComplex, spaces: &[Space]) -> Result<CheckReport> {
    let (b, pb) = build_bxk(k, spaces)?;
    let (d, pd) = build_b_dga(k, spaces)?;
    let witness = if spaces.iter().any(Space::has_differential) {
        return Ok(CheckReport::skipped(
            "b_dga.reduction",
            "coefficient differentials present",
        ));
    } else if b.basis() != d.basis() {
        Some("bases differ".to_string())
    } else if let Some(x) = (0..b.len()).find(|&x| b.d(x) != d.d(x)) {
        Some(format!("differentials differ on {}", b.label(x)))
    } else {
        (pb != pd).then(|| "product tables differ".to_string())
    };
    Ok(CheckReport::from_witness("b_dga.reduction", witness))
}
