//! Exhaustive and budgeted searches for the small cases.
//!
//! Every `Found` outcome carries a grid that has been passed back through
//! the verifier. `ExhaustedNonexistence` is only returned after the whole
//! space has been covered; subtrees are cut only by conditions every
//! solution must satisfy, never by heuristics.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::base::classic_constant;
use crate::construct::{build, expected_constant};
use crate::error::{Error, Result};
use crate::grid::GroupGrid;
use crate::group::{Cyclic, Dihedral, DihedralElement, FiniteGroup};
use crate::verify::{self, arbitrary_constants, arbitrary_line_products, OrderingClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    Found,
    ExhaustedNonexistence,
    BudgetExhausted,
}

/// A search certificate.
#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub claim: String,
    pub kind: OutcomeKind,
    /// Size of the full space, as a decimal string (it can exceed `u64`).
    pub space_size: String,
    /// Complete configurations handed to the acceptor.
    pub configurations_examined: u64,
    /// Search nodes visited, partial placements included.
    pub nodes_visited: u64,
    pub seed: Option<u64>,
    /// Witness rows as element tokens.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verifier_report: Option<serde_json::Value>,
    /// Deepest partial placement reached, for budgeted runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_partial: Option<BestPartial>,
    #[serde(skip)]
    pub witness_grid: Option<GroupGrid>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BestPartial {
    /// Number of cells placed, or lines agreeing for the linear search.
    pub score: usize,
    pub cells: Vec<Vec<String>>,
}

impl SearchOutcome {
    fn new(claim: impl Into<String>, space_size: String, seed: Option<u64>) -> Self {
        SearchOutcome {
            claim: claim.into(),
            kind: OutcomeKind::ExhaustedNonexistence,
            space_size,
            configurations_examined: 0,
            nodes_visited: 0,
            seed,
            witness: None,
            verifier_report: None,
            best_partial: None,
            witness_grid: None,
        }
    }

    fn found(&mut self, grid: GroupGrid, report: &verify::VerificationReport) {
        self.kind = OutcomeKind::Found;
        self.witness = Some(token_rows(&grid));
        self.verifier_report = Some(serde_json::to_value(report).expect("report serializes"));
        self.witness_grid = Some(grid);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }
}

fn token_rows(grid: &GroupGrid) -> Vec<Vec<String>> {
    grid.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|a| a.to_string()).collect())
        .collect()
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Groups of order four for the side-2 check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order4 {
    /// `D_2`, the Klein four-group.
    Klein,
    Cyclic4,
}

/// Place the elements of `g` into a `rows × cols` grid in every possible
/// way and look for one where all rows share a value and all columns share
/// the same value under some order of each line.
pub fn exhaustive_square<G: FiniteGroup>(g: &G, side: usize, claim: &str) -> Result<SearchOutcome> {
    let els = g.elements();
    if els.len() != side * side {
        return Err(Error::Dimension(format!("group of order {} on {side}x{side} cells", els.len())));
    }
    let mut out = SearchOutcome::new(claim, factorial(els.len()).to_string(), None);
    for perm in itertools::Itertools::permutations(els.iter().copied(), els.len()) {
        out.configurations_examined += 1;
        out.nodes_visited += 1;
        let (r, c) = arbitrary_constants(g, side, side, &perm)?;
        if let Some(mu) = r.intersection(&c).next() {
            out.kind = OutcomeKind::Found;
            out.witness = Some(
                perm.chunks(side)
                    .map(|row| row.iter().map(|a| g.token(*a)).collect())
                    .collect(),
            );
            out.verifier_report = Some(serde_json::json!({ "magic_constant": g.token(*mu) }));
            return Ok(out);
        }
    }
    Ok(out)
}

/// No semi-magic square of side 2 exists over a group of order 4.
pub fn sms2_nonexistence(group: Order4) -> SearchOutcome {
    let run = match group {
        Order4::Klein => exhaustive_square(&Dihedral::new(2).expect("k=2"), 2, "no semi-magic square of side 2 over D_2"),
        Order4::Cyclic4 => exhaustive_square(&Cyclic::new(4).expect("n=4"), 2, "no semi-magic square of side 2 over Z_4"),
    };
    run.expect("order 4 fits 2x2")
}

/// Reachable values of a line, given its cells in reading order.
type LineValues = fn(Dihedral, &[DihedralElement]) -> BTreeSet<DihedralElement>;

fn arbitrary_values(g: Dihedral, line: &[DihedralElement]) -> BTreeSet<DihedralElement> {
    arbitrary_line_products(&g, line)
        .expect("length checked")
        .into_iter()
        .map(|(v, _)| v)
        .collect()
}

/// Both halves of length two in either order.
fn half_pair_values(g: Dihedral, line: &[DihedralElement]) -> BTreeSet<DihedralElement> {
    let (a, b, c, d) = (line[0], line[1], line[2], line[3]);
    let left = [g.multiply(a, b), g.multiply(b, a)];
    let right = [g.multiply(c, d), g.multiply(d, c)];
    left.iter()
        .flat_map(|x| right.iter().map(move |y| g.multiply(*x, *y)))
        .collect()
}

fn rotation_half_pair_values(g: Dihedral, line: &[DihedralElement]) -> BTreeSet<DihedralElement> {
    let mut v = half_pair_values(g, line);
    v.retain(|a| a.is_rotation());
    v
}

/// Cells in an order that completes a row or column as early as possible:
/// row 0, the rest of column 0, the rest of row 1, and so on.
fn l_order(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut order = Vec::with_capacity(rows * cols);
    for d in 0..rows.max(cols) {
        if d < rows {
            order.extend((d..cols).map(|j| (d, j)));
        }
        if d < cols {
            order.extend((d + 1..rows).map(|i| (i, d)));
        }
    }
    order
}

type Acceptor = Box<dyn Fn(&GroupGrid) -> Result<verify::VerificationReport>>;

struct Backtracker {
    g: Dihedral,
    rows: usize,
    cols: usize,
    square: bool,
    order: Vec<(usize, usize)>,
    values: Vec<DihedralElement>,
    line_values: LineValues,
    budget: Option<u64>,
    cells: Vec<Option<DihedralElement>>,
    used: Vec<bool>,
    row_sets: Vec<Option<BTreeSet<DihedralElement>>>,
    col_sets: Vec<Option<BTreeSet<DihedralElement>>>,
    best: (usize, Vec<Option<DihedralElement>>),
    acceptor: Acceptor,
    rotation_only: bool,
    out: SearchOutcome,
}

enum Step {
    Continue,
    Stop,
}

impl Backtracker {
    fn line_done(&self, cells: impl Iterator<Item = (usize, usize)>) -> Option<Vec<DihedralElement>> {
        cells.map(|(i, j)| self.cells[i * self.cols + j]).collect()
    }

    /// Completed rows (and columns) still share a reachable value, and for
    /// squares some value is shared by both.
    fn consistent(&self) -> bool {
        let meet = |sets: &[Option<BTreeSet<DihedralElement>>]| -> Option<BTreeSet<DihedralElement>> {
            let mut it = sets.iter().flatten();
            let first = it.next()?.clone();
            Some(it.fold(first, |acc, s| &acc & s))
        };
        let r = meet(&self.row_sets);
        let c = meet(&self.col_sets);
        if r.as_ref().is_some_and(BTreeSet::is_empty) || c.as_ref().is_some_and(BTreeSet::is_empty) {
            return false;
        }
        match (self.square, r, c) {
            (true, Some(r), Some(c)) => !r.is_disjoint(&c),
            _ => true,
        }
    }

    fn descend(&mut self, depth: usize) -> Result<Step> {
        if depth > self.best.0 {
            self.best = (depth, self.cells.clone());
        }
        if depth == self.order.len() {
            self.out.configurations_examined += 1;
            let cells = self.cells.iter().map(|c| c.expect("complete")).collect();
            let grid = GroupGrid::new(self.g, self.rows, self.cols, cells)?;
            let report = (self.acceptor)(&grid)?;
            let ok = if self.square { report.is_semi_magic() } else { report.is_magic_rectangle() }
                && (!self.rotation_only || report.common_constants.iter().any(|a| a.is_rotation()));
            if ok {
                self.out.found(grid, &report);
                return Ok(Step::Stop);
            }
            return Ok(Step::Continue);
        }
        let (i, j) = self.order[depth];
        for v in 0..self.values.len() {
            if self.used[v] {
                continue;
            }
            if self.budget.is_some_and(|b| self.out.nodes_visited >= b) {
                self.out.kind = OutcomeKind::BudgetExhausted;
                return Ok(Step::Stop);
            }
            self.out.nodes_visited += 1;
            self.used[v] = true;
            self.cells[i * self.cols + j] = Some(self.values[v]);
            let row = self.line_done((0..self.cols).map(|c| (i, c)));
            let col = self.line_done((0..self.rows).map(|r| (r, j)));
            if let Some(line) = &row {
                self.row_sets[i] = Some((self.line_values)(self.g, line));
            }
            if let Some(line) = &col {
                self.col_sets[j] = Some((self.line_values)(self.g, line));
            }
            let step = if self.consistent() { self.descend(depth + 1)? } else { Step::Continue };
            self.row_sets[i] = None;
            self.col_sets[j] = None;
            self.cells[i * self.cols + j] = None;
            self.used[v] = false;
            if let Step::Stop = step {
                return Ok(Step::Stop);
            }
        }
        Ok(Step::Continue)
    }

    fn run(mut self) -> Result<SearchOutcome> {
        if self.budget == Some(0) {
            self.out.kind = OutcomeKind::BudgetExhausted;
        } else {
            self.descend(0)?;
        }
        if self.out.kind == OutcomeKind::BudgetExhausted {
            let cells = self.best.1;
            self.out.best_partial = Some(BestPartial {
                score: self.best.0,
                cells: cells
                    .chunks(self.cols)
                    .map(|r| r.iter().map(|c| c.map_or("_".to_string(), |a| a.to_string())).collect())
                    .collect(),
            });
        }
        Ok(self.out)
    }
}

#[allow(clippy::too_many_arguments)]
fn backtracker(
    g: Dihedral,
    rows: usize,
    cols: usize,
    line_values: LineValues,
    acceptor: Acceptor,
    budget: Option<u64>,
    seed: u64,
    claim: String,
) -> Backtracker {
    let mut values = g.enumerate_elements();
    values.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n = values.len();
    Backtracker {
        g,
        rows,
        cols,
        square: rows == cols,
        order: l_order(rows, cols),
        values,
        line_values,
        budget,
        cells: vec![None; rows * cols],
        used: vec![false; n],
        row_sets: vec![None; rows],
        col_sets: vec![None; cols],
        best: (0, vec![None; rows * cols]),
        acceptor,
        rotation_only: false,
        out: SearchOutcome::new(claim, factorial(n).to_string(), Some(seed)),
    }
}

/// Look for a `rows × cols` magic rectangle over `D_k` under arbitrary
/// orderings. `budget` caps search nodes; `None` means unlimited.
pub fn rectangle_search(rows: usize, cols: usize, k: u32, budget: Option<u64>, seed: u64) -> Result<SearchOutcome> {
    let g = Dihedral::new(k)?;
    if rows * cols != 2 * k as usize {
        return Err(Error::Dimension(format!("{rows}x{cols} grid for the {} elements of D_{k}", 2 * k)));
    }
    if rows.max(cols) > verify::MAX_ARBITRARY_LINE {
        return Err(Error::LineTooLong(rows.max(cols)));
    }
    let claim = if rows == cols {
        format!("semi-magic square of side {rows} over D_{k}")
    } else {
        format!("magic rectangle {rows}x{cols} over D_{k}")
    };
    let acceptor = Box::new(|grid: &GroupGrid| verify::verify_rectangle(grid, OrderingClass::Arbitrary));
    backtracker(g, rows, cols, arbitrary_values, acceptor, budget, seed, claim).run()
}

/// Look for a semi-circular semi-magic square of side 4 over `D_8`.
pub fn sms4_search(budget: u64, seed: u64) -> Result<SearchOutcome> {
    sms4_search_with(budget, seed, false)
}

/// As [`sms4_search`]; with `rotation_only` the constant must be a
/// rotation, as it is in every square the constructions produce.
pub fn sms4_search_with(budget: u64, seed: u64, rotation_only: bool) -> Result<SearchOutcome> {
    let g = Dihedral::new(8)?;
    let acceptor = Box::new(|grid: &GroupGrid| verify::exists_semicircular(grid, 2));
    let (values, claim): (LineValues, _) = if rotation_only {
        (rotation_half_pair_values, "semi-circular semi-magic square of side 4 over D_8 with a rotation constant")
    } else {
        (half_pair_values, "semi-circular semi-magic square of side 4 over D_8")
    };
    let mut b = backtracker(g, 4, 4, values, acceptor, Some(budget), seed, claim.to_string());
    b.rotation_only = rotation_only;
    b.run()
}

fn permute(grid: &GroupGrid, rp: &[usize], cp: &[usize]) -> GroupGrid {
    let cells = rp
        .iter()
        .flat_map(|&i| cp.iter().map(move |&j| (i, j)))
        .map(|(i, j)| grid.get(i, j))
        .collect();
    GroupGrid::new(grid.group(), grid.rows(), grid.cols(), cells).expect("same shape")
}

/// Lines agreeing with the most common row value plus those agreeing with
/// the most common column value.
fn agreement(report: &verify::VerificationReport) -> usize {
    let top = |v: &[DihedralElement]| {
        let mut counts = std::collections::BTreeMap::new();
        for a in v {
            *counts.entry(*a).or_insert(0usize) += 1;
        }
        counts.into_values().max().unwrap_or(0)
    };
    top(&report.row_products) + top(&report.col_products)
}

/// Permute whole rows and whole columns of `grid` looking for an
/// arrangement that is magic in the plain written order.
///
/// Exhaustive mode walks all row and column permutations in lexicographic
/// order (sides up to 8); otherwise pairs are drawn at random from `seed`.
/// The identity arrangement is always tried first.
pub fn linear_ordering_search(grid: &GroupGrid, budget: u64, seed: u64, exhaustive: bool) -> Result<SearchOutcome> {
    let (nr, nc) = (grid.rows(), grid.cols());
    if exhaustive && nr.max(nc) > verify::MAX_ARBITRARY_LINE {
        return Err(Error::LineTooLong(nr.max(nc)));
    }
    let space = factorial(nr) * factorial(nc);
    let mut out = SearchOutcome::new("magic under the written (linear) order after permuting rows and columns", space.to_string(), Some(seed));
    let accept = |r: &verify::VerificationReport| if grid.is_square() { r.is_semi_magic() } else { r.is_magic_rectangle() };
    let mut best: Option<(usize, GroupGrid)> = None;
    let mut attempt = |rp: &[usize], cp: &[usize], out: &mut SearchOutcome| -> bool {
        out.configurations_examined += 1;
        out.nodes_visited += 1;
        let g = permute(grid, rp, cp);
        let report = verify::linear_products(&g);
        if accept(&report) {
            out.found(g, &report);
            return true;
        }
        let score = agreement(&report);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, g));
        }
        false
    };

    let mut done = false;
    if exhaustive {
        use itertools::Itertools;
        'outer: for rp in (0..nr).permutations(nr) {
            for cp in (0..nc).permutations(nc) {
                if out.configurations_examined >= budget {
                    break 'outer;
                }
                if attempt(&rp, &cp, &mut out) {
                    done = true;
                    break 'outer;
                }
            }
        }
        if !done && u128::from(out.configurations_examined) == space {
            return Ok(out);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rp: Vec<usize> = (0..nr).collect();
        let mut cp: Vec<usize> = (0..nc).collect();
        while out.configurations_examined < budget {
            if attempt(&rp, &cp, &mut out) {
                done = true;
                break;
            }
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
        }
    }
    if !done {
        out.kind = OutcomeKind::BudgetExhausted;
        out.best_partial = best.map(|(score, g)| BestPartial {
            score,
            cells: token_rows(&g),
        });
    }
    Ok(out)
}

/// One constant together with the translation that produced it and whether
/// the built square was confirmed to reach it.
#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    pub constant: DihedralElement,
    pub translation: i64,
    pub verified: bool,
}

/// Constants reached by translating the generated base square.
///
/// This is only what the constructions produce, so it is a lower bound on
/// the set of all possible constants.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub m: usize,
    pub constants: Vec<DihedralElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub with_duals: Option<Vec<DihedralElement>>,
    pub realizations: Vec<Realization>,
}

impl SpectrumResult {
    pub fn all_verified(&self) -> bool {
        self.realizations.iter().all(|r| r.verified)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }
}

/// Collect primary constants over all translations `x ∈ [0, 2m²)`, and
/// confirm each one (and each dual, when asked) on an actual square.
pub fn spectrum_enumerate(m: usize, include_duals: bool) -> Result<SpectrumResult> {
    let mu = classic_constant(m).map_err(|_| Error::ConstructionGap(m))?;
    let mut primaries = BTreeSet::new();
    let mut firsts: Vec<(DihedralElement, i64)> = Vec::new();
    for x in 0..(2 * m * m) as i64 {
        let pair = expected_constant(m, mu + m as i64 * x)?;
        primaries.insert(pair.primary);
        let mut candidates = vec![pair.primary];
        if include_duals {
            candidates.push(pair.dual);
        }
        for c in candidates {
            if !firsts.iter().any(|(a, _)| *a == c) {
                firsts.push((c, x));
            }
        }
    }
    let mut realizations = Vec::new();
    for &(constant, x) in &firsts {
        let grid = build(m, x, None)?;
        let report = verify::exists_semicircular(&grid, m)?;
        realizations.push(Realization {
            constant,
            translation: x,
            verified: report.coverage.ok && report.common_constants.contains(&constant),
        });
    }
    realizations.sort_by_key(|r| r.constant);
    let all: BTreeSet<_> = firsts.iter().map(|f| f.0).collect();
    Ok(SpectrumResult {
        m,
        constants: primaries.into_iter().collect(),
        with_duals: include_duals.then(|| all.into_iter().collect()),
        realizations,
    })
}
