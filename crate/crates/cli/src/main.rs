use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use polyprod::dga::{ring_for_coeff, MonomialComplex, ProductTable, RingSummary};
use polyprod::koszul::{build_koszul, default_cap, quotient_quasi_iso_check, tor};
use polyprod::linalg::Coeff;
use polyprod::polyhedral::{
    build_b_dga, build_bxk, build_cxk, build_rxk, cxk_product, load_spaces, polyhedral_oracle, preset,
    rxk_summand_check, Space,
};
use polyprod::real_mac::{build_bk, build_rbar, rbar_product};
use polyprod::report::{CheckReport, CohomologyTable, Report, Status};
use polyprod::simplicial::{catalog, splitting_oracle, ShiftMode, SimplicialComplex, ACCEPTANCE_CATALOG};
use polyprod::verify::{default_spaces, parse_groups, run_suite, CheckGroup, SpacesCase, SuiteOptions};

/// Exact cohomology of real moment-angle complexes and polyhedral products.
#[derive(Parser, Debug)]
#[command(name = "polyprod", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology of one model, cross-checked against the splitting oracle where one applies.
    Cohomology(Common),
    /// Bigraded Tor of the Stanley–Reisner ring from the truncated Koszul complex.
    Tor(Common),
    /// Cohomology ring over a field: class representatives and structure constants.
    Ring(Common),
    /// Runs the verification suite; exits nonzero if any check fails.
    Verify(Common),
    /// Cohomology of C(X,K), B(X,K) and R(X,K) with the comparison checks.
    Polyhedral(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Simplicial complex JSON file: {"m": 4, "facets": [[1,2],[2,3],[3,4],[1,4]]}.
    #[arg(long, conflicts_with = "catalog")]
    complex: Option<String>,
    /// Built-in complex (simplex{m}, boundary{m}, gon{m}, points{m}, rp2_6); `all` for verify.
    #[arg(long)]
    catalog: Option<String>,
    /// Spaces JSON file or preset (circles, wedge, wedge11, dga_circle, cp2, spheres:n1,…).
    #[arg(long)]
    spaces: Option<String>,
    /// Coefficients: Z, Q or Zp (e.g. Z2). Verify accepts a comma-separated list.
    #[arg(long)]
    coeff: Option<String>,
    /// Truncation N of the Koszul complex (second degree); defaults to m + 2.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = Model::Bk)]
    model: Model,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// `all` or a comma-separated list of check groups.
    #[arg(long, default_value = "all")]
    checks: String,
    /// Flip one differential sign before verifying: `bk:SOURCE:TERM` or `rbar:SOURCE:TERM`.
    #[arg(long)]
    inject_fault: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Model {
    Rbar,
    Bk,
    Koszul,
    Cxk,
    Bxk,
    BDga,
    Rxk,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::Rbar => "rbar",
            Model::Bk => "bk",
            Model::Koszul => "koszul",
            Model::Cxk => "cxk",
            Model::Bxk => "bxk",
            Model::BDga => "b_dga",
            Model::Rxk => "rxk",
        }
    }

    fn is_polyhedral(self) -> bool {
        matches!(self, Model::Cxk | Model::Bxk | Model::BDga | Model::Rxk)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

struct Input {
    label: String,
    complex: SimplicialComplex,
}

fn inputs(c: &Common, allow_all: bool) -> Result<Vec<Input>> {
    match (&c.complex, &c.catalog) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let complex = SimplicialComplex::from_json(&text).with_context(|| format!("parsing {path}"))?;
            Ok(vec![Input {
                label: path.clone(),
                complex,
            }])
        }
        (None, Some(name)) if name == "all" => {
            if !allow_all {
                bail!("--catalog all is only accepted by verify");
            }
            Ok(ACCEPTANCE_CATALOG
                .iter()
                .map(|&n| Input {
                    label: n.into(),
                    complex: catalog(n).expect("catalog names are valid"),
                })
                .collect())
        }
        (None, Some(name)) => Ok(vec![Input {
            label: name.clone(),
            complex: catalog(name)?,
        }]),
        (None, None) => bail!("give --complex FILE or --catalog NAME"),
    }
}

fn spaces_for(c: &Common, m: usize) -> Result<(String, Vec<Space>)> {
    let spec = c.spaces.as_deref().unwrap_or("circles");
    if Path::new(spec).is_file() {
        let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
        let spaces = load_spaces(&text).with_context(|| format!("parsing {spec}"))?;
        if spaces.len() != m {
            bail!("{spec} gives {} spaces for a complex on {m} vertices", spaces.len());
        }
        let stem = Path::new(spec).file_stem().and_then(|s| s.to_str()).unwrap_or("spaces");
        Ok((stem.to_string(), spaces))
    } else {
        Ok((spec.to_string(), preset(spec, m)?))
    }
}

fn coeffs(c: &Common, default: &[Coeff]) -> Result<Vec<Coeff>> {
    match &c.coeff {
        None => Ok(default.to_vec()),
        Some(s) => s.split(',').map(|x| Ok(x.parse::<Coeff>()?)).collect(),
    }
}

fn single_coeff(c: &Common, default: Coeff) -> Result<Coeff> {
    let all = coeffs(c, &[default])?;
    match all[..] {
        [one] => Ok(one),
        _ => bail!("this command takes a single --coeff"),
    }
}

fn build(
    model: Model,
    k: &SimplicialComplex,
    spaces: &[Space],
    cap: usize,
) -> Result<(MonomialComplex, Option<ProductTable>)> {
    Ok(match model {
        Model::Rbar => (build_rbar(k), Some(rbar_product(k))),
        Model::Bk => {
            let (c, p) = build_bk(k);
            (c, Some(p))
        }
        Model::Koszul => (build_koszul(k, cap), None),
        Model::Cxk => (build_cxk(k, spaces)?, Some(cxk_product(k, spaces)?)),
        Model::Bxk => {
            let (c, p) = build_bxk(k, spaces)?;
            (c, Some(p))
        }
        Model::BDga => {
            let (c, p) = build_b_dga(k, spaces)?;
            (c, Some(p))
        }
        Model::Rxk => (build_rxk(k, spaces)?.0, None),
    })
}

fn table(model: &str, c: &MonomialComplex, coeff: Coeff) -> Result<CohomologyTable> {
    let bigraded = if c.is_bigraded() {
        Some(c.bigraded_cohomology(coeff)?)
    } else {
        None
    };
    let total = match &bigraded {
        Some(b) => b.total(),
        None => c.cohomology(coeff)?,
    };
    Ok(CohomologyTable::new(model, coeff, total, bigraded))
}

fn oracle_check(check: String, got: &CohomologyTable, want: &polyprod::linalg::CohomologyResult) -> CheckReport {
    let witness = got
        .total
        .first_difference(want)
        .map(|d| format!("degree {d}: {} vs oracle {}", got.total.get(d), want.get(d)));
    CheckReport::from_witness(check, witness)
}

fn cmd_cohomology(c: &Common) -> Result<Report> {
    let input = inputs(c, false)?.remove(0);
    let k = &input.complex;
    let coeff = single_coeff(c, Coeff::Z)?;
    let cap = c.cap.unwrap_or_else(|| default_cap(k.m()));
    let (space_label, spaces) = spaces_for(c, k.m())?;
    let mut report = Report::new("cohomology", &input.label);
    if c.model.is_polyhedral() {
        report.notes.push(format!("spaces: {space_label}"));
    }
    let (complex, _) = build(c.model, k, &spaces, cap)?;
    let t = table(c.model.name(), &complex, coeff)?;
    match c.model {
        Model::Rbar | Model::Bk => {
            let want = splitting_oracle(k, coeff, &ShiftMode::Real)?;
            report
                .checks
                .push(oracle_check(format!("oracle.{}.{coeff}", c.model.name()), &t, &want));
        }
        Model::Cxk | Model::Bxk if !spaces.iter().any(Space::has_differential) => {
            let want = polyhedral_oracle(k, &spaces, coeff)?;
            report
                .checks
                .push(oracle_check(format!("oracle.{}.{coeff}", c.model.name()), &t, &want));
        }
        Model::Koszul => {
            report.checks.extend(quotient_quasi_iso_check(k, cap, coeff)?);
            report.notes.push(format!("truncated at deg2 <= {cap}"));
        }
        Model::Rxk => {
            let spheres = spaces.iter().all(|s| s.len() == 1 && !s.has_differential());
            report.checks.push(rxk_summand_check(k, &spaces, coeff, spheres)?.0);
        }
        _ => {}
    }
    report.cohomology.push(t);
    report.sort_checks();
    Ok(report)
}

fn cmd_tor(c: &Common) -> Result<Report> {
    let input = inputs(c, false)?.remove(0);
    let k = &input.complex;
    let coeff = single_coeff(c, Coeff::Z)?;
    let cap = c.cap.unwrap_or_else(|| default_cap(k.m()));
    let tor = tor(k, cap, coeff)?;
    let mut report = Report::new("tor", &input.label);
    report
        .cohomology
        .push(CohomologyTable::new("tor", coeff, tor.total(), Some(tor)));
    report.checks.extend(quotient_quasi_iso_check(k, cap, coeff)?);
    report.notes.push(format!("truncated at deg2 <= {cap}"));
    report.sort_checks();
    Ok(report)
}

fn cmd_ring(c: &Common) -> Result<Report> {
    let input = inputs(c, false)?.remove(0);
    let k = &input.complex;
    let coeff = single_coeff(c, Coeff::Q)?;
    let (_, spaces) = spaces_for(c, k.m())?;
    let (complex, product) = build(c.model, k, &spaces, default_cap(k.m()))?;
    let Some(product) = product else {
        bail!(
            "model {} carries no product; use rbar, bk, cxk, bxk or b-dga",
            c.model.name()
        );
    };
    let summary: RingSummary = ring_for_coeff(&complex, &product, coeff)?;
    let mut report = Report::new("ring", &input.label);
    report.cohomology.push(table(c.model.name(), &complex, coeff)?);
    report.ring = Some(serde_json::to_value(&summary)?);
    Ok(report)
}

fn cmd_verify(c: &Common) -> Result<Report> {
    let all = inputs(c, true)?;
    let coeff_list = coeffs(c, &[Coeff::Z, Coeff::Q, Coeff::Zp(2)])?;
    let groups = parse_groups(&c.checks)?;
    let label = all.iter().map(|i| i.label.as_str()).collect::<Vec<_>>().join(",");
    let mut report = Report::new("verify", label);
    for input in &all {
        let k = &input.complex;
        let mut opts = SuiteOptions::new(coeff_list.clone());
        opts.cap = c.cap;
        opts.groups = groups.clone();
        opts.fault = c.inject_fault.as_deref().map(str::parse).transpose()?;
        if groups.contains(&CheckGroup::Polyhedral) {
            opts.spaces = match &c.spaces {
                Some(_) => {
                    let (name, spaces) = spaces_for(c, k.m())?;
                    vec![SpacesCase { name, spaces }]
                }
                None => default_spaces(k.m())?,
            };
        }
        let prefix = all.len() > 1;
        for r in run_suite(k, &opts)? {
            report.checks.push(if prefix {
                let id = format!("{}.{}", input.label, r.check);
                r.renamed(id)
            } else {
                r
            });
        }
    }
    report.sort_checks();
    Ok(report)
}

fn cmd_polyhedral(c: &Common) -> Result<Report> {
    let input = inputs(c, false)?.remove(0);
    let k = &input.complex;
    let coeff = single_coeff(c, Coeff::Z)?;
    let (name, spaces) = spaces_for(c, k.m())?;
    let mut report = Report::new("polyhedral", &input.label);
    report.notes.push(format!("spaces: {name}"));
    let models: &[Model] = if spaces.iter().any(Space::has_differential) {
        &[Model::BDga, Model::Rxk]
    } else {
        &[Model::Cxk, Model::Bxk, Model::Rxk]
    };
    for &model in models {
        let (complex, _) = build(model, k, &spaces, 0)?;
        report.cohomology.push(table(model.name(), &complex, coeff)?);
    }
    let mut opts = SuiteOptions::new(vec![coeff]);
    opts.groups = [CheckGroup::Polyhedral].into();
    opts.spaces = vec![SpacesCase { name, spaces }];
    report.checks = run_suite(k, &opts)?;
    report.sort_checks();
    Ok(report)
}

fn render_text(report: &Report) -> String {
    let mut out = format!("{} {}\n", report.command, report.input);
    for note in &report.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    for t in &report.cohomology {
        out.push_str(&t.render_text());
    }
    if let Some(ring) = &report.ring {
        if let Ok(summary) = serde_json::from_value::<RingSummary>(ring.clone()) {
            out.push_str(&format!("ring of {} over {}\n", summary.model, summary.coeff));
            for class in &summary.classes {
                out.push_str(&format!(
                    "  [{}] degree {}: {}\n",
                    class.id, class.degree, class.representative
                ));
            }
            for p in &summary.products {
                let value: Vec<String> = p.value.iter().map(|(i, v)| format!("{v}·[{i}]")).collect();
                out.push_str(&format!("  [{}]·[{}] = {}\n", p.left, p.right, value.join(" + ")));
            }
            out.push_str(&format!("  graded commutative: {}\n", summary.graded_commutative));
        }
    }
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for r in &report.checks {
        let tag = match r.status {
            Status::Pass => {
                pass += 1;
                "PASS"
            }
            Status::Fail => {
                fail += 1;
                "FAIL"
            }
            Status::Skipped => {
                skip += 1;
                "SKIP"
            }
        };
        out.push_str(&format!("{tag} {}", r.check));
        if let Some(w) = &r.witness {
            out.push_str(&format!("  witness: {w}"));
        }
        if let Some(n) = &r.note {
            out.push_str(&format!("  ({n})"));
        }
        out.push('\n');
    }
    if !report.checks.is_empty() {
        out.push_str(&format!("{pass} passed, {fail} failed, {skip} skipped\n"));
    }
    out
}

fn run(cli: Cli) -> Result<(Report, Format)> {
    let (report, common) = match &cli.command {
        Command::Cohomology(c) => (cmd_cohomology(c)?, c),
        Command::Tor(c) => (cmd_tor(c)?, c),
        Command::Ring(c) => (cmd_ring(c)?, c),
        Command::Verify(c) => (cmd_verify(c)?, c),
        Command::Polyhedral(c) => (cmd_polyhedral(c)?, c),
    };
    Ok((report, common.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, format)) => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
                Format::Text => render_text(&report),
            };
            // a closed pipe (e.g. `| head`) is not an error
            if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(2);
                }
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
