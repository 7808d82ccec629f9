//! The verification driver: every structural, sign, homotopy and oracle check for one
//! complex, grouped so callers can select a subset.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::dga::{
    check_bidegree, check_d_squared, check_support, ring_for_coeff, structural_suite, MonomialComplex, ProductTable,
    SignMode,
};
use crate::error::{Error, Result};
use crate::koszul::{
    build_koszul, check_homotopy_s, check_ideal_homotopy, default_cap, quotient_quasi_iso_check, IdealIdentity,
};
use crate::linalg::Coeff;
use crate::polyhedral::{
    b_dga_oracle_check, b_dga_reduction_check, build_b_dga, build_bxk, compare, oracle_compare_cxx,
    suspension_coincidence_check, verify_f_x, verify_h_g, Space,
};
use crate::real_mac::{build_bk, build_rbar, check_signed_chain_map, map_f, rbar_product};
use crate::report::CheckReport;
use crate::simplicial::{splitting_oracle, ShiftMode, SimplicialComplex};

/// The resolution homotopy is checked on E over at most this many variables.
pub const RESOLUTION_MAX_M: usize = 4;
/// and up to this deg₂.
pub const RESOLUTION_MAX_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckGroup {
    Structural,
    Oracle,
    Tor,
    Homotopy,
    Sign,
    Ring,
    Relabel,
    Polyhedral,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 8] = [
        CheckGroup::Structural,
        CheckGroup::Oracle,
        CheckGroup::Tor,
        CheckGroup::Homotopy,
        CheckGroup::Sign,
        CheckGroup::Ring,
        CheckGroup::Relabel,
        CheckGroup::Polyhedral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckGroup::Structural => "structural",
            CheckGroup::Oracle => "oracle",
            CheckGroup::Tor => "tor",
            CheckGroup::Homotopy => "homotopy",
            CheckGroup::Sign => "sign",
            CheckGroup::Ring => "ring",
            CheckGroup::Relabel => "relabel",
            CheckGroup::Polyhedral => "polyhedral",
        }
    }
}

impl fmt::Display for CheckGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckGroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::input(format!("unknown check group {s:?}")))
    }
}

/// Parses `all` or a comma-separated list of group names.
pub fn parse_groups(s: &str) -> Result<BTreeSet<CheckGroup>> {
    if s.trim() == "all" {
        return Ok(CheckGroup::ALL.into_iter().collect());
    }
    s.split(',').map(|g| g.trim().parse()).collect()
}

/// A named family of coefficient spaces.
#[derive(Clone, Debug)]
pub struct SpacesCase {
    pub name: String,
    pub spaces: Vec<Space>,
}

/// A single flipped differential sign in R̄(K) or B(K), for exercising the checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fault {
    pub model: FaultModel,
    pub source: usize,
    pub term: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultModel {
    Rbar,
    Bk,
}

impl FromStr for Fault {
    type Err = Error;
    /// `bk:SOURCE:TERM` or `rbar:SOURCE:TERM` with basis indices.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::input(format!("fault {s:?} is not MODEL:SOURCE:TERM with MODEL rbar or bk"));
        let parts: Vec<&str> = s.split(':').collect();
        let [model, source, term] = parts[..] else {
            return Err(bad());
        };
        let model = match model {
            "rbar" => FaultModel::Rbar,
            "bk" => FaultModel::Bk,
            _ => return Err(bad()),
        };
        Ok(Fault {
            model,
            source: source.parse().map_err(|_| bad())?,
            term: term.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub coeffs: Vec<Coeff>,
    /// Truncation N of the Koszul complex; `m + 2` when absent.
    pub cap: Option<usize>,
    pub spaces: Vec<SpacesCase>,
    pub groups: BTreeSet<CheckGroup>,
    pub fault: Option<Fault>,
}

impl SuiteOptions {
    pub fn new(coeffs: Vec<Coeff>) -> Self {
        SuiteOptions {
            coeffs,
            cap: None,
            spaces: Vec::new(),
            groups: CheckGroup::ALL.into_iter().collect(),
            fault: None,
        }
    }
}

/// The default coefficient spaces: all circles and a wedge S¹∨S² on the first vertex.
pub fn default_spaces(m: usize) -> Result<Vec<SpacesCase>> {
    ["circles", "wedge"]
        .into_iter()
        .map(|name| {
            Ok(SpacesCase {
                name: name.into(),
                spaces: crate::polyhedral::preset(name, m)?,
            })
        })
        .collect()
}

fn prefixed(prefix: &str, reports: Vec<CheckReport>) -> Vec<CheckReport> {
    reports
        .into_iter()
        .map(|r| {
            let id = format!("{prefix}.{}", r.check);
            r.renamed(id)
        })
        .collect()
}

/// R̄(K) and B(K) with their products, possibly carrying an injected fault.
struct Base {
    rbar: MonomialComplex,
    rbar_product: ProductTable,
    bk: MonomialComplex,
    bk_product: ProductTable,
}

impl Base {
    fn new(k: &SimplicialComplex, fault: Option<Fault>) -> Result<Self> {
        let (mut bk, bk_product) = build_bk(k);
        let mut rbar = build_rbar(k);
        if let Some(f) = fault {
            let target = match f.model {
                FaultModel::Rbar => &mut rbar,
                FaultModel::Bk => &mut bk,
            };
            if f.source >= target.len() || target.d(f.source).len() <= f.term {
                return Err(Error::input(format!(
                    "no differential term {}:{} to flip",
                    f.source, f.term
                )));
            }
            *target = target.with_flipped_sign(f.source, f.term);
        }
        Ok(Base {
            rbar,
            rbar_product: rbar_product(k),
            bk,
            bk_product,
        })
    }
}

fn structural(k: &SimplicialComplex, base: &Base, cap: usize) -> Vec<CheckReport> {
    let mut out = structural_suite(&base.rbar, Some((&base.rbar_product, SignMode::FirstDegree)));
    out.extend(structural_suite(
        &base.bk,
        Some((&base.bk_product, SignMode::TotalDegree)),
    ));
    let koszul = build_koszul(k, cap);
    out.extend([
        check_d_squared(&koszul),
        check_bidegree(&koszul),
        check_support(&koszul),
    ]);
    out
}

fn oracle(k: &SimplicialComplex, base: &Base, coeff: Coeff) -> Result<Vec<CheckReport>> {
    let want = splitting_oracle(k, coeff, &ShiftMode::Real)?;
    let rbar = base.rbar.cohomology(coeff)?;
    let bk = base.bk.cohomology(coeff)?;
    Ok(vec![
        compare(format!("oracle.rbar.{coeff}"), &rbar, &want, "R̄(K)"),
        compare(format!("oracle.bk.{coeff}"), &bk, &want, "B(K)"),
    ])
}

fn homotopy(k: &SimplicialComplex, cap: usize, coeffs: &[Coeff]) -> Vec<CheckReport> {
    let m = k.m().min(RESOLUTION_MAX_M);
    let mut out = vec![check_homotopy_s(m, cap.min(RESOLUTION_MAX_N))];
    for &coeff in coeffs {
        out.push(check_ideal_homotopy(k, cap, IdealIdentity::Sum, coeff));
    }
    // the difference form holds only where signs are invisible
    out.push(check_ideal_homotopy(k, cap, IdealIdentity::Difference, Coeff::Zp(2)));
    out
}

fn ring(base: &Base, coeffs: &[Coeff]) -> Vec<CheckReport> {
    coeffs
        .iter()
        .filter(|c| c.is_field())
        .map(|&coeff| {
            let id = format!("bk.ring.graded_commutative.{coeff}");
            match ring_for_coeff(&base.bk, &base.bk_product, coeff) {
                Ok(summary) if summary.graded_commutative => CheckReport::pass(id),
                Ok(_) => CheckReport::fail(id, "cohomology ring is not graded commutative"),
                Err(e) => CheckReport::fail(id, e.to_string()),
            }
        })
        .collect()
}

/// Cohomology of B(K) for K and for relabelings of K agree.
fn relabel(k: &SimplicialComplex) -> Result<Vec<CheckReport>> {
    let m = k.m();
    let reversed: Vec<usize> = (1..=m).rev().collect();
    let rotated: Vec<usize> = (1..=m).map(|v| v % m + 1).collect();
    let base = build_bk(k).0.cohomology(Coeff::Z)?;
    let mut out = Vec::new();
    for (name, perm) in [("reversed", reversed), ("rotated", rotated)] {
        let h = build_bk(&k.relabel(&perm)?).0.cohomology(Coeff::Z)?;
        out.push(compare(format!("relabel.{name}"), &h, &base, "relabeled"));
    }
    Ok(out)
}

fn polyhedral(k: &SimplicialComplex, case: &SpacesCase, coeffs: &[Coeff]) -> Result<Vec<CheckReport>> {
    let spaces = &case.spaces;
    let mut out = Vec::new();
    let (bxk, p) = build_bxk(k, spaces)?;
    out.extend(structural_suite(&bxk, Some((&p, SignMode::TotalDegree))));
    if spaces.iter().any(Space::has_differential) {
        let (bd, pd) = build_b_dga(k, spaces)?;
        out.extend(structural_suite(&bd, Some((&pd, SignMode::TotalDegree))));
        for &coeff in coeffs {
            out.push(b_dga_oracle_check(k, spaces, coeff)?);
        }
    } else {
        out.push(b_dga_reduction_check(k, spaces)?);
        for &coeff in coeffs {
            out.extend(oracle_compare_cxx(k, spaces, coeff)?);
        }
    }
    out.extend(verify_h_g(k, spaces)?);
    out.push(verify_f_x(k, spaces)?);
    let all_spheres = spaces.iter().all(|s| s.len() == 1 && !s.has_differential());
    for &coeff in coeffs {
        out.push(crate::polyhedral::rxk_summand_check(k, spaces, coeff, all_spheres)?.0);
    }
    out.extend(suspension_coincidence_check(k, spaces)?);
    Ok(prefixed(&case.name, out))
}

/// Runs the selected groups on K; reports are sorted by check id.
pub fn run_suite(k: &SimplicialComplex, opts: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let cap = opts.cap.unwrap_or_else(|| default_cap(k.m()));
    let has = |g| opts.groups.contains(&g);
    let base = Base::new(k, opts.fault)?;
    let mut out = Vec::new();
    if has(CheckGroup::Structural) {
        out.extend(structural(k, &base, cap));
    }
    if has(CheckGroup::Oracle) {
        for &coeff in &opts.coeffs {
            out.extend(oracle(k, &base, coeff)?);
        }
    }
    if has(CheckGroup::Tor) {
        for &coeff in &opts.coeffs {
            out.extend(quotient_quasi_iso_check(k, cap, coeff)?);
        }
    }
    if has(CheckGroup::Homotopy) {
        out.extend(homotopy(k, cap, &opts.coeffs));
    }
    if has(CheckGroup::Sign) {
        out.push(check_signed_chain_map(
            "f.sign_chain_map",
            &base.rbar,
            &base.bk,
            &map_f(k),
        ));
    }
    if has(CheckGroup::Ring) {
        out.extend(ring(&base, &opts.coeffs));
    }
    if has(CheckGroup::Relabel) && k.m() > 0 {
        out.extend(relabel(k)?);
    }
    if has(CheckGroup::Polyhedral) {
        for case in &opts.spaces {
            out.extend(polyhedral(k, case, &opts.coeffs)?);
        }
    }
    out.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::catalog;

    #[test]
    fn groups_parse() {
        assert_eq!(parse_groups("all").unwrap().len(), 8);
        let g = parse_groups("oracle, sign").unwrap();
        assert!(g.contains(&CheckGroup::Oracle) && g.contains(&CheckGroup::Sign));
        assert!(parse_groups("bogus").is_err());
    }

    #[test]
    fn square_passes_everything() {
        let k = catalog("gon4").unwrap();
        let mut opts = SuiteOptions::new(vec![Coeff::Z, Coeff::Q, Coeff::Zp(2)]);
        opts.spaces = default_spaces(4).unwrap();
        let reports = run_suite(&k, &opts).unwrap();
        for r in &reports {
            assert!(!r.is_fail(), "{r:?}");
        }
        let ids: BTreeSet<&str> = reports.iter().map(|r| r.check.as_str()).collect();
        assert_eq!(ids.len(), reports.len(), "check ids are unique");
    }

    #[test]
    fn injected_fault_breaks_the_sign_identity() {
        let k = catalog("gon4").unwrap();
        let mut opts = SuiteOptions::new(vec![Coeff::Z]);
        opts.groups = [CheckGroup::Sign].into();
        let bk = build_bk(&k).0;
        let source = (0..bk.len()).find(|&i| !bk.d(i).is_empty()).unwrap();
        opts.fault = Some(format!("bk:{source}:0").parse().unwrap());
        let r = &run_suite(&k, &opts).unwrap()[0];
        assert_eq!(r.check, "f.sign_chain_map");
        assert!(r.is_fail() && r.witness.is_some());
        opts.fault = Some("bk:0:7".parse().unwrap());
        assert!(run_suite(&k, &opts).is_err());
        assert!("pk:1:1".parse::<Fault>().is_err());
    }
}
