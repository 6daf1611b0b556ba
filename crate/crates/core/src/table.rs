//! Verification of the small-`n` values of `f(n,3,4,L)` for all 32 lists
//! `L ⊆ {0,..,4}`.
//!
//! Closed forms are compared exactly. Growth-rate rows cannot be settled at
//! this scale; for those the census is checked against the general upper
//! bound (3-good lists) and against an explicit lower-bound family whose
//! validity is itself checked.

use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::theorem_main_upper;
use crate::constructions::{
    complete_r_partite, count_triangle_and_matching_free, greedy_linear_transversal,
    greedy_partial_steiner, qn_member, Strategy,
};
use crate::enumerator::{count_labeled, SearchOptions};
use crate::freeness::{is_lk_free, ForbiddenList};
use crate::hypergraph::Hypergraph;
use crate::subset::binomial;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimedForm {
    Zero,
    One,
    Two,
    NPlusOne,
    /// `2^C(n-1,2)`.
    ExactPower,
    ThetaNLogN,
    ThetaN2LogN,
    ThetaN3,
    /// `2^C(n,3)`.
    FullCube,
}

impl ClaimedForm {
    /// The closed-form value at `n`, for forms that have one.
    pub fn exact_value(self, n: usize) -> Option<BigUint> {
        let pow = |e: u64| BigUint::from(1u8) << e;
        match self {
            ClaimedForm::Zero => Some(0u8.into()),
            ClaimedForm::One => Some(1u8.into()),
            ClaimedForm::Two => Some(2u8.into()),
            ClaimedForm::NPlusOne => Some((n + 1).into()),
            ClaimedForm::ExactPower => Some(pow(binomial(n - 1, 2))),
            ClaimedForm::FullCube => Some(pow(binomial(n, 3))),
            _ => None,
        }
    }

    /// Smallest `n` from which the closed form holds.
    fn holds_from(self) -> usize {
        match self {
            ClaimedForm::NPlusOne => 5,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    ExactMatch,
    BoundConsistent,
    OutOfDeskScope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub n: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    #[serde(rename = "L")]
    pub list: ForbiddenList,
    pub claimed_form: ClaimedForm,
    pub verification: Verification,
    pub n_values_checked: Vec<usize>,
    /// Decimal census values, aligned with `n_values_checked`.
    pub computed_values: Vec<String>,
    /// Values of `n` whose census hit the budget.
    pub skipped: Vec<usize>,
    pub checks: Vec<Check>,
    pub note: Option<String>,
    pub ok: bool,
}

impl TableRow {
    pub const CSV_HEADER: &'static str =
        "L,claimed_form,verification,n_values_checked,computed_values,skipped,ok";

    pub fn to_csv_row(&self) -> String {
        let join = |v: &[String]| v.join(";");
        let ns: Vec<String> = self
            .n_values_checked
            .iter()
            .map(|n| n.to_string())
            .collect();
        let skipped: Vec<String> = self.skipped.iter().map(|n| n.to_string()).collect();
        let enum_name = |v: serde_json::Value| v.as_str().unwrap_or_default().to_string();
        format!(
            "\"{}\",{},{},{},{},{},{}",
            self.list,
            enum_name(serde_json::to_value(self.claimed_form).unwrap()),
            enum_name(serde_json::to_value(self.verification).unwrap()),
            join(&ns),
            join(&self.computed_values),
            join(&skipped),
            self.ok
        )
    }
}

#[derive(Debug, Clone)]
pub struct TableOptions {
    /// Census sizes that must complete.
    pub required_n: Vec<usize>,
    /// Census sizes attempted under the budget and skipped if it trips.
    pub optional_n: Vec<usize>,
    pub search: SearchOptions,
    /// Seed for the randomized lower-bound constructions.
    pub seed: u64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            required_n: vec![4, 5, 6],
            optional_n: vec![7],
            search: SearchOptions {
                node_budget: Some(20_000_000),
                ..SearchOptions::default()
            },
            seed: 0,
        }
    }
}

pub fn classify(list: &ForbiddenList) -> (ClaimedForm, Verification) {
    use ClaimedForm::*;
    use Verification::*;
    let m = list.members();
    let has = |i| list.contains(i);
    match m.as_slice() {
        [] => (FullCube, ExactMatch),
        [0, 1, 2, 3, 4] => (Zero, ExactMatch),
        _ if has(0) && has(4) => (Zero, OutOfDeskScope),
        [1, 2, 3] => (Two, ExactMatch),
        [0, 1, 2, 3] | [1, 2, 3, 4] => (One, ExactMatch),
        [0, 2, 3] | [1, 2, 4] => (NPlusOne, ExactMatch),
        [1, 3] => (ExactPower, ExactMatch),
        [0, 1, 3] | [1, 3, 4] => (ThetaNLogN, BoundConsistent),
        [0] | [1] | [3] | [4] | [0, 1] | [3, 4] => (ThetaN3, BoundConsistent),
        _ => (ThetaN2LogN, BoundConsistent),
    }
}

fn list34(members: &[usize]) -> ForbiddenList {
    ForbiddenList::new(4, 3, members.iter().copied()).expect("valid list")
}

fn is_subset(list: &ForbiddenList, members: &[usize]) -> bool {
    list.is_subset_of(&list34(members))
}

/// A family all of whose subgraphs (or, for complemented lists, all of
/// whose supergraphs' complements) avoid the list, giving
/// `f >= 2^edges`.
struct LowerFamily {
    name: &'static str,
    graph: Hypergraph,
    log2_size: u64,
}

fn lower_family(list: &ForbiddenList, n: usize, seed: u64) -> Result<Option<LowerFamily>> {
    let strategy = Strategy::SeededRandom(seed);
    // base family and the list it is built for; the complementary list uses
    // the complemented graph
    let (name, base_list, graph, log2_size): (&str, ForbiddenList, Hypergraph, u64) =
        if is_subset(list, &[3, 4]) || is_subset(list, &[0, 1]) {
            let g = complete_r_partite(n, 3)?;
            let e = g.edge_count() as u64;
            ("complete_3_partite", list34(&[3, 4]), g, e)
        } else if is_subset(list, &[2, 3, 4]) || is_subset(list, &[0, 1, 2]) {
            let (g, _) = greedy_partial_steiner(n, 3, strategy)?;
            let e = g.edge_count() as u64;
            ("partial_steiner", list34(&[2, 3, 4]), g, e)
        } else if is_subset(list, &[1, 4]) || is_subset(list, &[0, 3]) {
            let (family, _) = greedy_linear_transversal(n, strategy)?;
            let g = qn_member(n, &family)?;
            (
                "turan_minus_linear",
                list34(&[1, 4]),
                g,
                family.len() as u64,
            )
        } else {
            return Ok(None);
        };
    let graph = if list.is_subset_of(&base_list) {
        graph
    } else {
        graph.complement()
    };
    Ok(Some(LowerFamily {
        name,
        graph,
        log2_size,
    }))
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (u64::try_from(x).unwrap() as f64).log2();
    }
    let top: u64 = u64::try_from(x >> (bits - 64)).unwrap();
    (top as f64).log2() + (bits - 64) as f64
}

fn verify_row(list: &ForbiddenList, opts: &TableOptions) -> Result<TableRow> {
    let (form, verification) = classify(list);
    let mut row = TableRow {
        list: list.clone(),
        claimed_form: form,
        verification,
        n_values_checked: Vec::new(),
        computed_values: Vec::new(),
        skipped: Vec::new(),
        checks: Vec::new(),
        note: (verification == Verification::OutOfDeskScope).then(|| {
            "value 0 holds from n = 13 on by R_3(4,4)=13; small-n values recorded for regression"
                .to_string()
        }),
        ok: true,
    };
    let ns = opts
        .required_n
        .iter()
        .map(|&n| (n, true))
        .chain(opts.optional_n.iter().map(|&n| (n, false)));
    for (n, required) in ns {
        let count = match count_labeled(n, 3, 4, list, &opts.search) {
            Ok(report) => report.labeled_count,
            Err(Error::BudgetExceeded { .. }) if !required => {
                row.skipped.push(n);
                continue;
            }
            Err(e) => return Err(e),
        };
        row.n_values_checked.push(n);
        row.computed_values.push(count.to_string());
        let mut check = |name: &str, passed: bool, detail: String| {
            row.checks.push(Check {
                name: name.to_string(),
                n,
                passed,
                detail,
            })
        };

        if verification == Verification::ExactMatch && n >= form.holds_from() {
            let want = form.exact_value(n).expect("exact rows have closed forms");
            check(
                "closed_form",
                count == want,
                format!("census {count}, formula {want}"),
            );
        }
        if list.is_3_good() && count > BigUint::ZERO {
            let bound = theorem_main_upper(n as u64, 3, 4)?;
            let lg = log2_big(&count);
            check(
                "upper_bound",
                bound.admits(lg),
                format!("log2 census {lg:.4} <= {:.4}", bound.log2_value),
            );
        }
        if verification == Verification::BoundConsistent {
            if form == ClaimedForm::ThetaNLogN {
                let domain = count_triangle_and_matching_free(n - 1)?;
                check(
                    "link_domain",
                    count == BigUint::from(domain),
                    format!(
                        "census {count}, |F(triangle, matching)({})| = {domain}",
                        n - 1
                    ),
                );
            }
            if let Some(fam) = lower_family(list, n, opts.seed)? {
                let free = is_lk_free(&fam.graph, list)?.free;
                check(
                    "lower_family_free",
                    free,
                    format!("{} with {} edges", fam.name, fam.graph.edge_count()),
                );
                let floor = BigUint::from(1u8) << fam.log2_size;
                check(
                    "lower_bound",
                    count >= floor,
                    format!("census {count} >= 2^{}", fam.log2_size),
                );
            }
        }
    }
    row.ok = row.checks.iter().all(|c| c.passed) && !row.n_values_checked.is_empty();
    Ok(row)
}

/// One row per list, ordered by membership bitmask.
pub fn verify_table(opts: &TableOptions) -> Result<Vec<TableRow>> {
    ForbiddenList::all(4, 3)?
        .iter()
        .map(|list| verify_row(list, opts))
        .collect()
}
