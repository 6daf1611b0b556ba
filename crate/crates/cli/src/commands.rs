use std::fs;
use std::ops::ControlFlow;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hypercensus_core::bounds::{
    barnes_g_log, corollary_d_bound, linkgraph_bound, qn_lower_log, steiner_lower_log,
    theorem_main_upper, LogBound,
};
use hypercensus_core::constructions::{
    clique_plus_isolated_family, complete_r_partite, greedy_linear_transversal,
    greedy_partial_steiner, max_codegree, qn_member, turan_cn, Strategy,
};
use hypercensus_core::csp::{Csp, ENUMERATE_MAX_M};
use hypercensus_core::enumerator::{
    count_iso_classes, count_labeled, enumerate_free, max_d, CountReport, DMode, Method,
    SearchOptions,
};
use hypercensus_core::table::{verify_table, TableOptions, TableRow};
use hypercensus_core::{ForbiddenList, Hypergraph};

use crate::output::{canonicalize, csv, emit, json};
use crate::{
    Budgets, Cli, CliError, Command, ConstructionName, CspGenerator, DModeArg, Family, Format,
    FormulaArg, MethodArg,
};

type Result<T> = std::result::Result<T, CliError>;

/// Largest `m` for the all-instances sweep (`3^C(m,2)` problems).
const SWEEP_MAX_M: usize = 5;
const TABLE_NODE_BUDGET: u64 = 20_000_000;

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Count {
            family,
            budgets,
            method,
        } => {
            let mut opts = search_options(budgets)?;
            opts.method = match method {
                MethodArg::Backtracking => Method::Backtracking,
                MethodArg::Exhaustive => Method::Exhaustive,
            };
            let list = parse_list(family)?;
            let report = count_labeled(family.n, family.r, family.k, &list, &opts)?;
            emit_report(cli, report)
        }
        Command::IsoCount { family, budgets } => {
            let opts = search_options(budgets)?;
            let list = parse_list(family)?;
            let report = count_iso_classes(family.n, family.r, family.k, &list, &opts)?;
            emit_report(cli, report)
        }
        Command::Enumerate {
            family,
            budgets,
            limit,
        } => enumerate(cli, family, budgets, *limit),
        Command::Csp {
            file,
            generator,
            m,
            seed,
            instances,
            assignments,
        } => csp(
            cli,
            file.as_deref(),
            *generator,
            *m,
            *seed,
            *instances,
            *assignments,
        ),
        Command::Construct {
            name,
            n,
            r,
            seed,
            graph_out,
        } => construct(cli, *name, *n, *r, *seed, graph_out.as_deref()),
        Command::Bounds {
            formula,
            n,
            r,
            k,
            i,
            census,
        } => bounds(cli, *formula, *n, *r, *k, *i, census.as_deref()),
        Command::VerifyTable {
            budgets,
            seed,
            max_n,
        } => verify(cli, budgets, *seed, *max_n),
        Command::DStats {
            a,
            family,
            budgets,
            mode,
            seed,
            samples,
        } => d_stats(cli, *a, family, budgets, *mode, *seed, *samples),
    }
}

fn search_options(b: &Budgets) -> Result<SearchOptions> {
    if b.node_budget == Some(0) {
        return Err(CliError::Usage("--node-budget must be positive".into()));
    }
    let time_budget = match b.time_budget {
        Some(t) if !(t > 0.0 && t.is_finite()) => {
            return Err(CliError::Usage(
                "--time-budget must be a positive number of seconds".into(),
            ))
        }
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    Ok(SearchOptions {
        threads: b.threads,
        node_budget: b.node_budget,
        time_budget,
        method: Method::Backtracking,
    })
}

fn parse_list(f: &Family) -> Result<ForbiddenList> {
    Ok(ForbiddenList::parse(f.k, f.r, &f.list)?)
}

fn emit_report(cli: &Cli, mut report: CountReport) -> Result<()> {
    if cli.canonical {
        report.elapsed_s = 0.0;
    }
    let body = match cli.format {
        Format::Json => json(&serde_json::to_value(&report).expect("report serializes")),
        Format::Csv => csv(CountReport::CSV_HEADER, [report.to_csv_row()]),
    };
    emit(cli, &body)
}

fn edges_1based(g: &Hypergraph) -> Vec<Vec<usize>> {
    g.edges()
        .map(|e| e.iter().map(|v| v + 1).collect())
        .collect()
}

fn enumerate(cli: &Cli, family: &Family, budgets: &Budgets, limit: Option<u64>) -> Result<()> {
    let opts = search_options(budgets)?;
    let list = parse_list(family)?;
    let mut found = Vec::new();
    let result = enumerate_free(family.n, family.r, family.k, &list, &opts, |g| {
        found.push(edges_1based(g));
        if limit.is_some_and(|l| found.len() as u64 >= l) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    match result {
        Ok(_) | Err(hypercensus_core::Error::Aborted) => {}
        Err(e) => return Err(e.into()),
    }
    let body = match cli.format {
        Format::Json => json(&json!({
            "n": family.n,
            "r": family.r,
            "k": family.k,
            "L": list,
            "visited": found.len(),
            "complete": limit.is_none_or(|l| (found.len() as u64) < l),
            "hypergraphs": found,
        })),
        Format::Csv => csv(
            "index,edges",
            found.iter().enumerate().map(|(i, edges)| {
                let parts: Vec<String> = edges
                    .iter()
                    .map(|e| {
                        e.iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                format!("{i},{}", parts.join(";"))
            }),
        ),
    };
    emit(cli, &body)
}

fn csp(
    cli: &Cli,
    file: Option<&std::path::Path>,
    generator: Option<CspGenerator>,
    m: Option<usize>,
    seed: u64,
    instances: u64,
    with_assignments: bool,
) -> Result<()> {
    let need_m =
        || m.ok_or_else(|| CliError::Usage("--m is required for generated instances".into()));
    let problems: Box<dyn Iterator<Item = std::result::Result<Csp, hypercensus_core::Error>>> =
        match (file, generator) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)?;
                Box::new(std::iter::once(Csp::parse_text(&text)))
            }
            (None, Some(CspGenerator::Extremal)) => {
                Box::new(std::iter::once(Csp::extremal(need_m()?)))
            }
            (None, Some(CspGenerator::Random)) => {
                let m = need_m()?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Box::new((0..instances).map(move |_| Csp::random(m, &mut rng)))
            }
            (None, Some(CspGenerator::Sweep)) => {
                let m = need_m()?;
                if m > SWEEP_MAX_M {
                    return Err(CliError::Usage(format!(
                        "sweep is limited to m <= {SWEEP_MAX_M}"
                    )));
                }
                let total = 3u64.pow((m * (m - 1) / 2) as u32);
                Box::new((0..total).map(move |i| Csp::nth(m, i)))
            }
            (None, None) => return Err(CliError::Usage("give --file or --generator".into())),
        };
    let mut count_instances = 0u64;
    let mut max_count = 0u64;
    let mut violations = 0u64;
    let mut vars = 0;
    let mut listed = None;
    for problem in problems {
        let problem = problem?;
        vars = problem.m();
        let count = problem.count_satisfying();
        count_instances += 1;
        max_count = max_count.max(count);
        if count > problem.m() as u64 + 1 {
            violations += 1;
        }
        if with_assignments && count_instances == 1 && problem.m() <= ENUMERATE_MAX_M {
            let list: Vec<String> = problem
                .enumerate_satisfying()?
                .iter()
                .map(|a| format!("{a:?}"))
                .collect();
            listed = Some(list);
        }
    }
    let bound = vars as u64 + 1;
    let pass = violations == 0;
    let body = match cli.format {
        Format::Json => {
            let mut report = json!({
                "m": vars,
                "instances": count_instances,
                "max_count": max_count,
                "bound": bound,
                "violations": violations,
                "verdict": if pass { "pass" } else { "fail" },
            });
            if count_instances == 1 {
                report["count"] = json!(max_count);
            }
            if let Some(list) = listed {
                report["assignments"] = json!(list);
            }
            json(&report)
        }
        Format::Csv => csv(
            "m,instances,max_count,bound,violations,verdict",
            [format!(
                "{vars},{count_instances},{max_count},{bound},{violations},{}",
                if pass { "pass" } else { "fail" }
            )],
        ),
    };
    emit(cli, &body)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!(
            "{violations} instance(s) exceed m+1 solutions"
        )))
    }
}

fn strategy(seed: Option<u64>) -> Strategy {
    seed.map_or(Strategy::ColexFirst, Strategy::SeededRandom)
}

fn free_verdict(g: &Hypergraph, k: usize, members: &[usize]) -> Result<(String, bool)> {
    let list = ForbiddenList::new(k, g.r(), members.iter().copied())?;
    let name = format!("({list},{k})-free");
    if g.n() < k {
        return Ok((name, true));
    }
    Ok((name, hypercensus_core::freeness::is_lk_free(g, &list)?.free))
}

fn construct(
    cli: &Cli,
    name: ConstructionName,
    n: usize,
    r: usize,
    seed: Option<u64>,
    graph_out: Option<&std::path::Path>,
) -> Result<()> {
    let mut trace = Value::Null;
    let graphs: Vec<Hypergraph>;
    let mut verdicts = Vec::new();
    match name {
        ConstructionName::Turan => {
            let g = turan_cn(n)?;
            verdicts.push(free_verdict(&g, 4, &[1, 4])?);
            graphs = vec![g];
        }
        ConstructionName::Qn => {
            let (family, t) = greedy_linear_transversal(n, strategy(seed))?;
            let g = qn_member(n, &family)?;
            verdicts.push(free_verdict(&g, 4, &[1, 4])?);
            trace = t.to_json();
            graphs = vec![g];
        }
        ConstructionName::Steiner => {
            let (g, t) = greedy_partial_steiner(n, r, strategy(seed))?;
            verdicts.push(("codegree <= 1".to_string(), max_codegree(&g) <= 1));
            trace = t.to_json();
            graphs = vec![g];
        }
        ConstructionName::RPartite => {
            let g = complete_r_partite(n, r)?;
            let members: Vec<usize> = (3..=r + 1).collect();
            verdicts.push(free_verdict(&g, r + 1, &members)?);
            graphs = vec![g];
        }
        ConstructionName::CliquePlusIsolated => {
            graphs = clique_plus_isolated_family(n)?;
            let mut all = true;
            for g in &graphs {
                all &= free_verdict(g, 4, &[0, 2, 3])?.1;
            }
            verdicts.push(("({0,2,3},4)-free".to_string(), all));
        }
    }
    let text: String = graphs
        .iter()
        .map(Hypergraph::to_text)
        .collect::<Vec<_>>()
        .join("\n");
    if let Some(path) = graph_out {
        fs::write(path, &text)?;
    }
    let pass = verdicts.iter().all(|(_, ok)| *ok);
    let construction = serde_json::to_value(name_str(name)).expect("string");
    let body = match cli.format {
        Format::Json => {
            let mut report = json!({
                "construction": construction,
                "n": n,
                "r": graphs[0].r(),
                "edges": graphs.iter().map(Hypergraph::edge_count).collect::<Vec<_>>(),
                "verdicts": verdicts
                    .iter()
                    .map(|(p, ok)| json!({"predicate": p, "passed": ok}))
                    .collect::<Vec<_>>(),
                "trace": trace,
            });
            if graph_out.is_none() {
                report["hypergraph"] = json!(text);
            }
            json(&report)
        }
        Format::Csv => csv(
            "construction,n,r,edges,passed",
            [format!(
                "{},{n},{},{},{pass}",
                name_str(name),
                graphs[0].r(),
                graphs
                    .iter()
                    .map(|g| g.edge_count().to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            )],
        ),
    };
    emit(cli, &body)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!(
            "{} failed its predicate",
            name_str(name)
        )))
    }
}

fn name_str(name: ConstructionName) -> &'static str {
    match name {
        ConstructionName::Turan => "turan",
        ConstructionName::Qn => "qn",
        ConstructionName::Steiner => "steiner",
        ConstructionName::RPartite => "r_partite",
        ConstructionName::CliquePlusIsolated => "clique_plus_isolated",
    }
}

/// Base-2 logarithm of a decimal integer, `-inf` for zero.
fn log2_decimal(s: &str) -> Result<f64> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CliError::Usage(format!(
            "--census must be a decimal integer, got {s:?}"
        )));
    }
    let digits = s.trim_start_matches('0');
    if digits.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    // leading 17 digits carry all the precision an f64 has
    let head = &digits[..digits.len().min(17)];
    let rest = digits.len() - head.len();
    Ok(head.parse::<f64>().expect("digits").log2() + rest as f64 * 10f64.log2())
}

fn bounds(
    cli: &Cli,
    formula: FormulaArg,
    n: u64,
    r: u64,
    k: u64,
    i: u64,
    census: Option<&str>,
) -> Result<()> {
    let evaluate = |f: FormulaArg| -> hypercensus_core::Result<LogBound> {
        match f {
            FormulaArg::TheoremMainUpper => theorem_main_upper(n, r, k),
            FormulaArg::CorollaryD => corollary_d_bound(i, n, r, k),
            FormulaArg::Linkgraph => linkgraph_bound(n, k),
            FormulaArg::QnLower => qn_lower_log(n),
            FormulaArg::SteinerLower => steiner_lower_log(n, r),
            FormulaArg::BarnesG => barnes_g_log(n),
            FormulaArg::All => unreachable!(),
        }
    };
    let results: Vec<LogBound> = if formula == FormulaArg::All {
        [
            FormulaArg::TheoremMainUpper,
            FormulaArg::CorollaryD,
            FormulaArg::Linkgraph,
            FormulaArg::QnLower,
            FormulaArg::SteinerLower,
            FormulaArg::BarnesG,
        ]
        .into_iter()
        .filter_map(|f| evaluate(f).ok())
        .collect()
    } else {
        vec![evaluate(formula)?]
    };
    let census_log2 = census.map(log2_decimal).transpose()?;
    let body = match cli.format {
        Format::Json => {
            let records: Vec<Value> = results
                .iter()
                .map(|b| {
                    let mut v = serde_json::to_value(b).expect("bound serializes");
                    if let Some(c) = census_log2 {
                        v["census_le_bound"] = json!(b.admits(c));
                    }
                    v
                })
                .collect();
            let mut report = json!({ "bounds": records });
            if let Some(c) = census_log2 {
                report["census_log2"] = json!(c);
            }
            json(&report)
        }
        Format::Csv => csv(
            "formula_id,n,log2_value,vacuous,census_le_bound",
            results.iter().map(|b| {
                let id = serde_json::to_value(b.formula_id).expect("id");
                format!(
                    "{},{n},{},{},{}",
                    id.as_str().unwrap_or_default(),
                    b.log2_value,
                    b.vacuous,
                    census_log2
                        .map(|c| b.admits(c).to_string())
                        .unwrap_or_default()
                )
            }),
        ),
    };
    emit(cli, &body)
}

fn verify(cli: &Cli, budgets: &Budgets, seed: u64, max_n: usize) -> Result<()> {
    let mut search = search_options(budgets)?;
    search.node_budget.get_or_insert(TABLE_NODE_BUDGET);
    let opts = TableOptions {
        required_n: vec![4, 5, 6],
        optional_n: (7..=max_n).collect(),
        search,
        seed,
    };
    let rows = verify_table(&opts)?;
    let mismatches: Vec<String> = rows
        .iter()
        .filter(|r| !r.ok)
        .map(|r| r.list.to_string())
        .collect();
    let body = match cli.format {
        Format::Json => {
            let mut report = json!({
                "rows": rows,
                "mismatches": mismatches,
            });
            if cli.canonical {
                canonicalize(&mut report);
            }
            json(&report)
        }
        Format::Csv => csv(TableRow::CSV_HEADER, rows.iter().map(TableRow::to_csv_row)),
    };
    emit(cli, &body)?;
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("rows {}", mismatches.join(" "))))
    }
}

#[allow(clippy::too_many_arguments)]
fn d_stats(
    cli: &Cli,
    a: usize,
    family: &Family,
    budgets: &Budgets,
    mode: DModeArg,
    seed: u64,
    samples: usize,
) -> Result<()> {
    let opts = search_options(budgets)?;
    let list = parse_list(family)?;
    let mode = match mode {
        DModeArg::Exhaustive => DMode::Exhaustive,
        DModeArg::Sample => DMode::Sample { seed, samples },
    };
    let stat = max_d(a, family.n, &list, mode, &opts)?;
    let (n, r, k) = (family.n as u64, family.r as u64, family.k as u64);
    let mut bounds = Vec::new();
    if a >= 1 && n >= 1 {
        bounds.push(corollary_d_bound(r - a as u64, n, r, k)?);
    }
    if a + 1 == family.r && n >= 1 {
        bounds.push(linkgraph_bound(n, k)?);
    }
    let body = match cli.format {
        Format::Json => {
            let mut v = serde_json::to_value(&stat).expect("stat serializes");
            let value = (stat.value as f64).log2();
            v["bounds"] = json!(bounds
                .iter()
                .map(|b| {
                    let mut rec = serde_json::to_value(b).expect("bound serializes");
                    rec["value_le_bound"] = json!(b.admits(value));
                    rec
                })
                .collect::<Vec<_>>());
            json(&v)
        }
        Format::Csv => csv(
            "a,n,r,k,L,value,exact,anchors",
            [format!(
                "{a},{},{},{},\"{}\",{},{},{}",
                family.n, family.r, family.k, list, stat.value, stat.exact, stat.anchors
            )],
        ),
    };
    emit(cli, &body)
}
