use std::io::Read;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use hyperci::ciideals::{
    build_itilde_s, make_t_diagonal_order, var_names, DiagonalOrderSpec, DiagonalVariant, RhoVariant,
};
use hyperci::decomp::{
    build_report, identity_suite, minimal_primes, radical_witness_search, verify_corner_quotient,
    verify_local_saturation, verify_minimal_component_prime, verify_radical_by_intersection,
    verify_saturation_identity, verify_theorem_gb_with, witness_in_all_primes, DecompositionReport, RadicalVerdict,
    ReportOptions, WitnessRecord, INTERSECTION_CELL_LIMIT,
};
use hyperci::indexcomb::{CellGrid, IndexTuple, Shape};
use hyperci::polyengine::{buchberger, radical_membership, Ideal, IdealFile, MonomialOrder, Polynomial};
use hyperci::switchable::{enumerate_switchable, SwitchableSet};
use hyperci::Error;

use crate::output::{csv, emit, text_enumerate, text_report, text_verify, Row};
use crate::{Check, Cli, Command, Format, EXIT_FAILED, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, SCHEMA_VERSION};

/// Failure of a command before any result is produced.
pub enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome<T> = Result<T, Failure>;

#[derive(Serialize)]
struct ConfigEcho<'a> {
    command: String,
    shape: Option<&'a [usize]>,
    t: Option<usize>,
    order: Option<&'a str>,
    degree_bound: u32,
    cell_budget: usize,
    pair_budget: usize,
    format: Format,
    output: Option<&'a str>,
    seed: u64,
    timings: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    config: ConfigEcho<'a>,
    result: T,
}

fn envelope<'a, T: Serialize>(cli: &'a Cli, result: T) -> Envelope<'a, T> {
    let g = &cli.global;
    Envelope {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            command: cli.command.name(),
            shape: g.shape.as_deref(),
            t: g.t,
            order: g.order.as_deref(),
            degree_bound: g.degree_bound,
            cell_budget: g.cell_budget,
            pair_budget: g.pair_budget,
            format: g.format,
            output: g.output.as_deref(),
            seed: g.seed,
            timings: g.timings,
        },
        result,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("results serialize");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> u8 {
    let g = &cli.global;
    if g.cell_budget == 0 || g.pair_budget == 0 {
        eprintln!("error: budgets must be positive");
        return EXIT_USAGE;
    }
    let result = match &cli.command {
        Command::Enumerate => enumerate(cli),
        Command::Verify { check } => verify(cli, *check),
        Command::Report => report(cli),
        Command::Gb { file } => gb(cli, file),
    };
    match result.and_then(|(body, code)| emit(cli, &body).map(|_| code)) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Resource(_) => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            }
        }
    }
}

pub fn verdict_code(passed: bool) -> u8 {
    if passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn grid_from_flags(cli: &Cli) -> Outcome<Arc<CellGrid>> {
    let dims = cli.global.shape.clone().ok_or_else(|| Failure::Usage("--shape is required for this command".into()))?;
    let t = cli.global.t.unwrap_or(dims.len());
    let shape = Shape::new(dims, t)?;
    Ok(Arc::new(CellGrid::new(&shape)?))
}

fn elapsed(cli: &Cli, start: Instant) -> Option<u64> {
    cli.global.timings.then(|| start.elapsed().as_millis() as u64)
}

fn progress(grid: &CellGrid, what: &str) {
    eprintln!("[hyperci] {} t={}: {what}", grid.shape(), grid.shape().t());
}

/// Parsed `--order` value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderChoice {
    Diagonal(DiagonalVariant, Option<Vec<usize>>),
    Lex,
    DegRevLex,
}

pub fn parse_order(s: &str) -> Result<OrderChoice, String> {
    let (head, perm) = match s.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (s, None),
    };
    let perm = perm
        .map(|p| {
            p.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad permutation entry {x:?} in --order")))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    match (head, perm) {
        ("lex-diag", p) => Ok(OrderChoice::Diagonal(DiagonalVariant::Lex, p)),
        ("revlex-diag", p) => Ok(OrderChoice::Diagonal(DiagonalVariant::RevLex, p)),
        ("lex", None) => Ok(OrderChoice::Lex),
        ("degrevlex", None) => Ok(OrderChoice::DegRevLex),
        ("lex" | "degrevlex", Some(_)) => Err(format!("--order {head} takes no permutation")),
        _ => Err(format!("unknown order {s:?}; expected lex-diag[:perm], revlex-diag[:perm], lex or degrevlex")),
    }
}

fn order_label(choice: &OrderChoice) -> String {
    match choice {
        OrderChoice::Diagonal(v, p) => {
            let head = if *v == DiagonalVariant::Lex { "lex-diag" } else { "revlex-diag" };
            match p {
                Some(p) => format!("{head}:{}", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
                None => head.to_string(),
            }
        }
        OrderChoice::Lex => "lex".into(),
        OrderChoice::DegRevLex => "degrevlex".into(),
    }
}

fn resolve_order(choice: &OrderChoice, grid: &CellGrid, t: usize) -> Outcome<MonomialOrder> {
    Ok(match choice {
        OrderChoice::Lex => MonomialOrder::lex(grid.size()),
        OrderChoice::DegRevLex => MonomialOrder::degrevlex(grid.size()),
        OrderChoice::Diagonal(variant, perm) => {
            let mut spec = match variant {
                DiagonalVariant::Lex => DiagonalOrderSpec::lex(grid, t),
                DiagonalVariant::RevLex => DiagonalOrderSpec::revlex(grid, t),
            };
            if let Some(p) = perm {
                spec.delta = p.clone();
            }
            make_t_diagonal_order(spec, grid, t)?.order
        }
    })
}

fn order_choices(cli: &Cli) -> Outcome<Vec<OrderChoice>> {
    match &cli.global.order {
        Some(s) => Ok(vec![parse_order(s).map_err(Failure::Usage)?]),
        None => Ok(vec![
            OrderChoice::Diagonal(DiagonalVariant::Lex, None),
            OrderChoice::Diagonal(DiagonalVariant::RevLex, None),
        ]),
    }
}

#[derive(Serialize)]
pub struct EnumerateResult {
    pub shape: Shape,
    pub t: usize,
    pub minimal_prime_count: usize,
    pub sets: Vec<Vec<IndexTuple>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

fn enumerate(cli: &Cli) -> Outcome<(String, u8)> {
    let grid = grid_from_flags(cli)?;
    let start = Instant::now();
    progress(&grid, "enumerating maximal switchable sets");
    let primes = minimal_primes(grid.clone(), cli.global.cell_budget)?;
    let res = EnumerateResult {
        shape: grid.shape().clone(),
        t: grid.shape().t(),
        minimal_prime_count: primes.len(),
        sets: primes.iter().map(|p| p.set().cells()).collect(),
        runtime_ms: elapsed(cli, start),
    };
    let body = match cli.global.format {
        Format::Json => to_json(&envelope(cli, &res)),
        Format::Csv => csv(&[Row::counts(&res.shape, res.minimal_prime_count, res.runtime_ms)]),
        Format::Text => text_enumerate(&res),
    };
    Ok((body, EXIT_OK))
}

#[derive(Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Serialize)]
pub struct VerifyResult {
    pub shape: Shape,
    pub t: usize,
    pub check: Check,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_prime_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical_verdict: Option<RadicalVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

struct Checks<'a> {
    cli: &'a Cli,
    entries: Vec<CheckEntry>,
}

impl Checks<'_> {
    /// Runs `f`, which returns the number of cases and the failing ones.
    fn run(
        &mut self,
        name: impl Into<String>,
        f: impl FnOnce() -> hyperci::Result<(usize, usize)>,
    ) -> hyperci::Result<()> {
        let start = Instant::now();
        let (cases, failures) = f()?;
        self.entries.push(CheckEntry {
            name: name.into(),
            passed: failures == 0 && cases > 0,
            cases,
            detail: (failures > 0).then(|| format!("{failures} of {cases} cases failed")),
            runtime_ms: elapsed(self.cli, start),
        });
        Ok(())
    }

    fn note(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.entries.push(CheckEntry { name: name.into(), passed, cases: 1, detail, runtime_ms: None });
    }
}

fn count(results: impl IntoIterator<Item = hyperci::Result<bool>>) -> hyperci::Result<(usize, usize)> {
    let (mut cases, mut failures) = (0, 0);
    for r in results {
        cases += 1;
        failures += usize::from(!r?);
    }
    Ok((cases, failures))
}

fn switchable_sets(grid: &Arc<CellGrid>, cli: &Cli) -> hyperci::Result<Vec<SwitchableSet>> {
    let t = grid.shape().t();
    enumerate_switchable(grid, t, cli.global.cell_budget)?
        .into_iter()
        .map(|m| SwitchableSet::with_t(grid.clone(), t, m))
        .collect()
}

fn verify(cli: &Cli, check: Check) -> Outcome<(String, u8)> {
    let grid = grid_from_flags(cli)?;
    let t = grid.shape().t();
    let n = grid.shape().n();
    let budget = cli.global.pair_budget;
    let start = Instant::now();
    let mut checks = Checks { cli, entries: Vec::new() };
    let mut res = VerifyResult {
        shape: grid.shape().clone(),
        t,
        check,
        passed: false,
        checks: Vec::new(),
        minimal_prime_count: None,
        radical_verdict: None,
        witness: None,
        runtime_ms: None,
    };
    match check {
        Check::Saturation => {
            progress(&grid, "saturating I<t> by the product of all variables");
            checks.run("saturation-identity", || count([verify_saturation_identity(&grid, t, budget)]))?;
            if grid.size() <= INTERSECTION_CELL_LIMIT {
                progress(&grid, "local quotients and saturations");
                let local: Vec<_> = switchable_sets(&grid, cli)?
                    .iter()
                    .map(|s| verify_local_saturation(s, budget))
                    .collect::<hyperci::Result<_>>()?;
                checks.run("local-quotient", || count(local.iter().map(|r| Ok(r.quotient_equal))))?;
                checks.run("local-saturation", || count(local.iter().map(|r| Ok(r.saturation_equal))))?;
            }
        }
        Check::Gb => {
            let small = grid.size() <= INTERSECTION_CELL_LIMIT;
            let sets: Vec<SwitchableSet> = if small {
                switchable_sets(&grid, cli)?
            } else {
                minimal_primes(grid.clone(), cli.global.cell_budget)?.into_iter().map(|p| p.set().clone()).collect()
            };
            for choice in order_choices(cli)? {
                let label = order_label(&choice);
                progress(&grid, &format!("Buchberger criterion under {label}"));
                let ord = resolve_order(&choice, &grid, t)?;
                checks.run(format!("explicit-basis[{label}]"), || {
                    count(sets.iter().map(|s| verify_theorem_gb_with(s, &ord)))
                })?;
                if small {
                    checks.run(format!("leading-terms[{label}]"), || {
                        count(sets.iter().map(|s| leading_terms_agree(s, &ord, budget)))
                    })?;
                }
            }
        }
        Check::Quotient => {
            if t != n {
                return Err(Failure::Usage(format!("verify quotient needs t = n = {n}")));
            }
            let primes = minimal_primes(grid.clone(), cli.global.cell_budget)?;
            res.minimal_prime_count = Some(primes.len());
            for (name, variant) in [("rho-full", RhoVariant::Full), ("rho-reduced", RhoVariant::Reduced)] {
                progress(&grid, &format!("quotients by {name}"));
                checks
                    .run(name, || count(primes.iter().map(|p| verify_minimal_component_prime(p, variant, budget))))?;
            }
            checks.run("corner-quotient", || count([verify_corner_quotient(&grid, budget)]))?;
        }
        Check::Radical => {
            let primes = minimal_primes(grid.clone(), cli.global.cell_budget)?;
            res.minimal_prime_count = Some(primes.len());
            progress(&grid, &format!("witness search up to degree {}", cli.global.degree_bound));
            let found = radical_witness_search(&grid, t, &primes, cli.global.degree_bound, budget)?;
            match found {
                Some(w) => {
                    let ideal = hyperci::ciideals::build_i(&grid, t);
                    checks.run("witness-in-minimal-primes", || count([witness_in_all_primes(&w, &primes)]))?;
                    checks.run("witness-outside-ideal", || count([Ok(!ideal.gb(budget)?.contains(&w.polynomial))]))?;
                    checks.run("witness-in-radical", || count([radical_membership(&w.polynomial, &ideal, budget)]))?;
                    res.radical_verdict = Some(RadicalVerdict::NonRadicalWitnessed);
                    res.witness =
                        Some(WitnessRecord { polynomial: w.polynomial.render(&var_names(&grid)), degree: w.degree() });
                }
                None if grid.size() <= INTERSECTION_CELL_LIMIT => {
                    progress(&grid, "intersecting minimal primes");
                    let ok = verify_radical_by_intersection(&grid, t, &primes, budget)?;
                    checks.run("intersection-of-minimal-primes", || count([Ok(ok)]))?;
                    res.radical_verdict =
                        Some(if ok { RadicalVerdict::RadicalVerified } else { RadicalVerdict::Undetermined });
                }
                None => {
                    checks.note(
                        "witness-search",
                        true,
                        Some(format!(
                            "no witness up to degree {}; grid too large for the intersection check",
                            cli.global.degree_bound
                        )),
                    );
                    res.radical_verdict = Some(RadicalVerdict::Undetermined);
                }
            }
        }
        Check::Identities => {
            progress(&grid, "identity suite");
            for r in identity_suite(&grid, t, budget)? {
                let (cases, failures) = (r.cases, r.failures);
                checks.run(r.name, || Ok((cases, failures)))?;
                if cases == 0 {
                    let e = checks.entries.last_mut().unwrap();
                    e.passed = true;
                    e.detail = Some("no case satisfies the hypotheses".into());
                }
            }
        }
    }
    res.checks = checks.entries;
    res.passed = res.checks.iter().all(|c| c.passed);
    res.runtime_ms = elapsed(cli, start);
    let code = verdict_code(res.passed);
    let body = match cli.global.format {
        Format::Json => to_json(&envelope(cli, &res)),
        Format::Csv => csv(&[Row::verify(&res)]),
        Format::Text => text_verify(&res),
    };
    Ok((body, code))
}

fn leading_terms_agree(s: &SwitchableSet, ord: &MonomialOrder, budget: usize) -> hyperci::Result<bool> {
    let gens = hyperci::ciideals::theorem_gb(s)?;
    let reduced = build_itilde_s(s).groebner(ord, budget)?;
    let lead = |ps: &[Polynomial]| {
        let mut ms: Vec<_> = ps.iter().filter_map(|p| p.leading_monomial(ord)).collect();
        ms.sort();
        ms.dedup();
        let minimal: Vec<_> = ms.iter().filter(|m| !ms.iter().any(|o| o != *m && o.divides(m))).cloned().collect();
        minimal
    };
    Ok(lead(&gens) == lead(reduced.polys()))
}

#[derive(Serialize)]
pub struct ReportResult {
    pub reports: Vec<DecompositionReport>,
    pub passed: bool,
}

pub const DEFAULT_INSTANCES: [(&[usize], usize); 5] =
    [(&[2, 2, 2, 2], 1), (&[2, 2, 2, 2], 2), (&[2, 2, 2, 2], 3), (&[2, 2, 4], 2), (&[2, 2, 4], 3)];

fn report(cli: &Cli) -> Outcome<(String, u8)> {
    let instances: Vec<(Vec<usize>, usize)> = match &cli.global.shape {
        Some(dims) => match cli.global.t {
            Some(t) => vec![(dims.clone(), t)],
            None => (1..=dims.len()).map(|t| (dims.clone(), t)).collect(),
        },
        None => DEFAULT_INSTANCES.iter().map(|(d, t)| (d.to_vec(), *t)).collect(),
    };
    let opts = ReportOptions {
        cell_budget: cli.global.cell_budget,
        pair_budget: cli.global.pair_budget,
        degree_bound: cli.global.degree_bound,
        saturation: true,
        gb: true,
        quotient: true,
        radical: true,
        timings: cli.global.timings,
    };
    let mut reports = Vec::new();
    for (dims, t) in instances {
        let grid = Arc::new(CellGrid::new(&Shape::new(dims, t)?)?);
        progress(&grid, "building report");
        reports.push(build_report(grid, &opts)?);
    }
    let passed = reports.iter().all(|r| {
        let v = &r.verifications;
        [&v.saturation, &v.gb, &v.quotient].iter().all(|c| c.as_ref().is_none_or(|c| c.passed))
    });
    let res = ReportResult { reports, passed };
    let body = match cli.global.format {
        Format::Json => to_json(&envelope(cli, &res)),
        Format::Csv => csv(&res.reports.iter().map(Row::report).collect::<Vec<_>>()),
        Format::Text => text_report(&res.reports),
    };
    Ok((body, verdict_code(passed)))
}

fn gb(cli: &Cli, path: &str) -> Outcome<(String, u8)> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))?;
    }
    let file = IdealFile::parse(&text)?;
    let polys = file.polynomials()?;
    let nvars = file.nvars();
    let choice = match &cli.global.order {
        Some(s) => parse_order(s).map_err(Failure::Usage)?,
        None => OrderChoice::DegRevLex,
    };
    let ord = match &choice {
        OrderChoice::Lex => MonomialOrder::lex(nvars),
        OrderChoice::DegRevLex => MonomialOrder::degrevlex(nvars),
        OrderChoice::Diagonal(..) => {
            let grid = grid_from_flags(cli)?;
            if grid.size() != nvars {
                return Err(Failure::Usage(format!(
                    "diagonal orders need --shape with {nvars} cells, got {}",
                    grid.size()
                )));
            }
            resolve_order(&choice, &grid, grid.shape().t())?
        }
    };
    Ideal::new(nvars, polys.clone())?;
    let basis = buchberger(&polys, &ord, cli.global.pair_budget)?;
    let out = IdealFile::from_polynomials(file.vars.clone(), file.aux, basis.polys());
    let body = match cli.global.format {
        Format::Json => {
            let mut s = out.to_json();
            s.push('\n');
            s
        }
        Format::Text => {
            let names = out.names();
            basis.polys().iter().map(|p| format!("{}\n", p.render(&names))).collect()
        }
        Format::Csv => return Err(Failure::Usage("gb writes JSON or text".into())),
    };
    Ok((body, EXIT_OK))
}
