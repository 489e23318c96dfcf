//! Synchronous games, the syncLCS game of a linear system, and classical
//! (deterministic) strategy analysis.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::LinearSystem;
use crate::zp::ZpVector;

/// A two-player game with shared finite question and answer sets.
///
/// Inputs and outputs are indexed `0..num_inputs()` and `0..num_outputs()`.
/// `rule(x, y, i, j)` is the winning predicate for answers `(x, y)` on
/// questions `(i, j)`.
pub trait SynchronousGame {
    fn num_inputs(&self) -> usize;
    fn num_outputs(&self) -> usize;
    fn rule(&self, x: usize, y: usize, i: usize, j: usize) -> bool;
    fn input_label(&self, i: usize) -> String;
    fn output_label(&self, x: usize) -> String;

    /// Outputs worth trying on input `i`, in search order. Outputs not listed
    /// must lose every round that asks `i`.
    fn candidate_outputs(&self, i: usize) -> Vec<usize> {
        let _ = i;
        (0..self.num_outputs()).collect()
    }
}

/// Exhaustive check of `rule(x, y | i, i) = 0` for all `x != y`.
pub fn check_synchronous<G: SynchronousGame + ?Sized>(g: &G) -> bool {
    let outs = g.num_outputs();
    (0..g.num_inputs()).all(|i| (0..outs).all(|x| (0..outs).all(|y| x == y || !g.rule(x, y, i, i))))
}

/// A game given by an explicit winning table.
#[derive(Debug, Clone)]
pub struct TableGame {
    inputs: usize,
    outputs: usize,
    // index: ((i * inputs + j) * outputs + x) * outputs + y
    table: Vec<bool>,
}

impl TableGame {
    pub fn new(inputs: usize, outputs: usize) -> Self {
        TableGame { inputs, outputs, table: vec![false; inputs * inputs * outputs * outputs] }
    }

    fn slot(&self, x: usize, y: usize, i: usize, j: usize) -> usize {
        ((i * self.inputs + j) * self.outputs + x) * self.outputs + y
    }

    pub fn set(&mut self, x: usize, y: usize, i: usize, j: usize, win: bool) {
        let s = self.slot(x, y, i, j);
        self.table[s] = win;
    }
}

impl SynchronousGame for TableGame {
    fn num_inputs(&self) -> usize {
        self.inputs
    }
    fn num_outputs(&self) -> usize {
        self.outputs
    }
    fn rule(&self, x: usize, y: usize, i: usize, j: usize) -> bool {
        self.table[self.slot(x, y, i, j)]
    }
    fn input_label(&self, i: usize) -> String {
        format!("q{i}")
    }
    fn output_label(&self, x: usize) -> String {
        format!("a{x}")
    }
}

/// syncLCS(A, b).
///
/// The full answer set is Z_p^n, but any answer outside every `S_i` loses on
/// every question. Outputs are stored as the distinct members of the union of
/// the `S_i` (first-appearance order over rows, each `S_i` in enumeration
/// order) followed by one "losing" bucket standing for everything else.
#[derive(Debug, Clone)]
pub struct LcsGame {
    system: LinearSystem,
    outputs: Vec<ZpVector>,
    /// Output indices of `S_i`, per 0-based row.
    row_outputs: Vec<Vec<usize>>,
    /// For each output, membership bitmap over rows.
    member: Vec<Vec<bool>>,
}

impl LcsGame {
    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    /// Index of the catch-all losing output.
    pub fn losing_output(&self) -> usize {
        self.outputs.len()
    }

    /// Vector for output `x`, or `None` for the losing bucket.
    pub fn output_vector(&self, x: usize) -> Option<&ZpVector> {
        self.outputs.get(x)
    }

    pub fn output_index(&self, v: &ZpVector) -> Option<usize> {
        self.outputs.iter().position(|o| o == v)
    }

    /// Output indices making up `S_i` (0-based row).
    pub fn row_outputs(&self, row: usize) -> &[usize] {
        &self.row_outputs[row]
    }

    /// Every winning `(i, j, x, y)` as JSON, 1-based rows.
    pub fn rule_table_json(&self) -> serde_json::Value {
        let mut wins = Vec::new();
        for i in 0..self.num_inputs() {
            for j in 0..self.num_inputs() {
                for &x in &self.row_outputs[i] {
                    for &y in &self.row_outputs[j] {
                        if self.rule(x, y, i, j) {
                            wins.push(serde_json::json!([i + 1, j + 1, x, y]));
                        }
                    }
                }
            }
        }
        serde_json::json!({
            "inputs": (1..=self.num_inputs()).collect::<Vec<_>>(),
            "outputs": self.outputs.iter().map(|o| o.entries().to_vec()).collect::<Vec<_>>(),
            "losing_output": self.losing_output(),
            "winning": wins,
        })
    }
}

/// Builds syncLCS(A, b).
pub fn build_synclcs_game(sys: &LinearSystem, cap: u64) -> Result<LcsGame> {
    let rows = sys.rows(cap)?;
    let mut outputs: Vec<ZpVector> = Vec::new();
    let mut index = std::collections::HashMap::new();
    let mut row_outputs = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut ids = Vec::with_capacity(row.solutions.len());
        for x in &row.solutions {
            let id = *index.entry(x.clone()).or_insert_with(|| {
                outputs.push(x.clone());
                outputs.len() - 1
            });
            ids.push(id);
        }
        row_outputs.push(ids);
    }
    let mut member = vec![vec![false; rows.len()]; outputs.len()];
    for (r, ids) in row_outputs.iter().enumerate() {
        for &id in ids {
            member[id][r] = true;
        }
    }
    Ok(LcsGame { system: sys.clone(), outputs, row_outputs, member })
}

impl SynchronousGame for LcsGame {
    fn num_inputs(&self) -> usize {
        self.system.m()
    }

    fn num_outputs(&self) -> usize {
        self.outputs.len() + 1
    }

    fn rule(&self, x: usize, y: usize, i: usize, j: usize) -> bool {
        let (Some(xv), Some(yv)) = (self.outputs.get(x), self.outputs.get(y)) else {
            return false;
        };
        self.member[x][i] && self.member[y][j] && self.system.agree_on_shared(i + 1, j + 1, xv, yv)
    }

    fn input_label(&self, i: usize) -> String {
        format!("row {}", i + 1)
    }

    fn output_label(&self, x: usize) -> String {
        match self.outputs.get(x) {
            Some(v) => v.to_string(),
            None => "other".to_string(),
        }
    }

    fn candidate_outputs(&self, i: usize) -> Vec<usize> {
        if self.row_outputs[i].is_empty() {
            vec![self.losing_output()]
        } else {
            self.row_outputs[i].clone()
        }
    }
}

/// An answer per question.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DeterministicStrategy {
    pub assignment: Vec<usize>,
}

impl DeterministicStrategy {
    pub fn new(assignment: Vec<usize>) -> Self {
        DeterministicStrategy { assignment }
    }

    pub fn answer(&self, i: usize) -> usize {
        self.assignment[i]
    }
}

fn check_total<G: SynchronousGame + ?Sized>(s: &DeterministicStrategy, g: &G) -> Result<()> {
    if s.assignment.len() != g.num_inputs() || s.assignment.iter().any(|&x| x >= g.num_outputs()) {
        return Err(Error::DimensionMismatch(format!(
            "strategy over {} inputs does not fit a game with {} inputs and {} outputs",
            s.assignment.len(),
            g.num_inputs(),
            g.num_outputs()
        )));
    }
    Ok(())
}

/// Whether `s` wins on every question pair.
pub fn is_perfect<G: SynchronousGame + ?Sized>(s: &DeterministicStrategy, g: &G) -> bool {
    check_total(s, g).is_ok() && {
        let n = g.num_inputs();
        (0..n).all(|i| (0..n).all(|j| g.rule(s.answer(i), s.answer(j), i, j)))
    }
}

/// A winning fraction `wins / total` under the uniform question
/// distribution, kept unreduced so it reads as a count.
#[derive(Debug, Clone, Copy, Eq, Serialize)]
pub struct GameValue {
    pub wins: u64,
    pub total: u64,
}

impl GameValue {
    /// Numerator and denominator in lowest terms.
    pub fn reduced(self) -> (u64, u64) {
        if self.total == 0 {
            return (0, 1);
        }
        let g = gcd(self.wins, self.total);
        (self.wins / g, self.total / g)
    }

    pub fn is_one(self) -> bool {
        self.wins == self.total
    }

    pub fn as_f64(self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.wins as f64 / self.total as f64
        }
    }
}

impl PartialEq for GameValue {
    fn eq(&self, other: &Self) -> bool {
        self.wins as u128 * other.total as u128 == other.wins as u128 * self.total as u128
    }
}

impl fmt::Display for GameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.wins, self.total)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Exact winning fraction of `s` under uniform questions.
pub fn game_value<G: SynchronousGame + ?Sized>(s: &DeterministicStrategy, g: &G) -> Result<GameValue> {
    check_total(s, g)?;
    let n = g.num_inputs();
    let wins = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| g.rule(s.answer(i), s.answer(j), i, j))
        .count() as u64;
    Ok(GameValue { wins, total: (n * n) as u64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
}

/// Backtracking search for a perfect deterministic strategy.
///
/// Inputs are assigned in index order, candidates tried in
/// [`SynchronousGame::candidate_outputs`] order, and a branch is cut as soon
/// as any pair among the assigned inputs loses. `Ok(None)` certifies that no
/// perfect strategy exists.
pub fn find_perfect_deterministic<G: SynchronousGame + ?Sized>(
    g: &G,
    budget: u64,
) -> Result<(Option<DeterministicStrategy>, SearchStats)> {
    let n = g.num_inputs();
    let candidates: Vec<Vec<usize>> = (0..n).map(|i| g.candidate_outputs(i)).collect();
    let mut stats = SearchStats::default();
    let mut assignment = Vec::with_capacity(n);
    let found = extend_perfect(g, &candidates, &mut assignment, &mut stats, budget)?;
    Ok((found.then(|| DeterministicStrategy::new(assignment)), stats))
}

fn extend_perfect<G: SynchronousGame + ?Sized>(
    g: &G,
    candidates: &[Vec<usize>],
    assignment: &mut Vec<usize>,
    stats: &mut SearchStats,
    budget: u64,
) -> Result<bool> {
    let i = assignment.len();
    if i == candidates.len() {
        return Ok(true);
    }
    for &x in &candidates[i] {
        stats.nodes += 1;
        if stats.nodes > budget {
            return Err(Error::SearchBudgetExceeded { budget });
        }
        if !g.rule(x, x, i, i) {
            continue;
        }
        let fits = assignment.iter().enumerate().all(|(k, &y)| g.rule(y, x, k, i) && g.rule(x, y, i, k));
        if !fits {
            continue;
        }
        assignment.push(x);
        if extend_perfect(g, candidates, assignment, stats, budget)? {
            return Ok(true);
        }
        assignment.pop();
    }
    Ok(false)
}

/// Branch-and-bound search for a deterministic strategy of maximal value.
///
/// Ties resolve to the first strategy met in index order.
pub fn best_deterministic<G: SynchronousGame + ?Sized>(
    g: &G,
    budget: u64,
) -> Result<(DeterministicStrategy, GameValue, SearchStats)> {
    let n = g.num_inputs();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let c = g.candidate_outputs(i);
            if c.is_empty() {
                vec![0]
            } else {
                c
            }
        })
        .collect();
    let mut search = BestSearch {
        g,
        candidates: &candidates,
        budget,
        stats: SearchStats::default(),
        best: None,
        assignment: Vec::with_capacity(n),
    };
    search.run(0)?;
    let (wins, assignment) = search.best.expect("at least one complete assignment");
    Ok((DeterministicStrategy::new(assignment), GameValue { wins, total: (n * n) as u64 }, search.stats))
}

struct BestSearch<'a, G: SynchronousGame + ?Sized> {
    g: &'a G,
    candidates: &'a [Vec<usize>],
    budget: u64,
    stats: SearchStats,
    best: Option<(u64, Vec<usize>)>,
    assignment: Vec<usize>,
}

impl<G: SynchronousGame + ?Sized> BestSearch<'_, G> {
    /// Wins gained by answering `x` on input `i` given the current prefix.
    fn gain(&self, i: usize, x: usize) -> u64 {
        let mut w = self.g.rule(x, x, i, i) as u64;
        for (k, &y) in self.assignment.iter().enumerate() {
            w += self.g.rule(y, x, k, i) as u64 + self.g.rule(x, y, i, k) as u64;
        }
        w
    }

    fn run(&mut self, score: u64) -> Result<()> {
        let n = self.candidates.len();
        let i = self.assignment.len();
        if i == n {
            if self.best.as_ref().is_none_or(|(b, _)| score > *b) {
                self.best = Some((score, self.assignment.clone()));
            }
            return Ok(());
        }
        // Each remaining input can at best win its best pairing with the
        // prefix, its diagonal, and both orders against later inputs.
        let remaining = (n - i) as u64;
        let bound: u64 =
            (i..n).map(|r| self.candidates[r].iter().map(|&x| self.gain(r, x)).max().unwrap_or(0)).sum::<u64>()
                + remaining * (remaining - 1);
        if let Some((b, _)) = &self.best {
            if score + bound <= *b {
                return Ok(());
            }
        }
        for idx in 0..self.candidates[i].len() {
            let x = self.candidates[i][idx];
            self.stats.nodes += 1;
            if self.stats.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded { budget: self.budget });
            }
            let gain = self.gain(i, x);
            self.assignment.push(x);
            self.run(score + gain)?;
            self.assignment.pop();
            if self.best.as_ref().is_some_and(|(b, _)| *b == (n * n) as u64) {
                return Ok(());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{magic_square, one_eq};
    use crate::zp::ZpVector;

    fn v(p: u32, e: &[i64]) -> ZpVector {
        ZpVector::new(p, e).unwrap()
    }

    #[test]
    fn one_equation_rules() {
        let g = build_synclcs_game(&one_eq(), 1 << 10).unwrap();
        let zero = g.output_index(&v(2, &[0, 0])).unwrap();
        let ones = g.output_index(&v(2, &[1, 1])).unwrap();
        assert!(g.rule(zero, zero, 0, 0));
        assert!(!g.rule(zero, ones, 0, 0));
        assert!(!g.rule(g.losing_output(), zero, 0, 0));
        assert!(check_synchronous(&g));
    }

    #[test]
    fn magic_square_shared_variable() {
        let g = build_synclcs_game(&magic_square(), 1 << 10).unwrap();
        let zero = g.output_index(&v(2, &[0; 9])).unwrap();
        assert!(g.rule(zero, zero, 0, 3));
        // answer in S_1 that sets x1 = 1 conflicts with the zero answer on column 1
        let x = g.output_index(&v(2, &[1, 1, 0, 0, 0, 0, 0, 0, 0])).unwrap();
        assert!(!g.rule(x, zero, 0, 3));
        assert!(!g.rule(x, zero, 0, 4));
        // rows 1 and 2 share no variable
        assert!(g.rule(x, zero, 0, 1));
        // the zero vector is not in S_6 since b_6 = 1
        assert!(!g.rule(x, zero, 0, 5));
    }

    #[test]
    fn non_synchronous_table_detected() {
        let mut t = TableGame::new(1, 2);
        t.set(0, 0, 0, 0, true);
        assert!(check_synchronous(&t));
        t.set(0, 1, 0, 0, true);
        assert!(!check_synchronous(&t));
    }

    #[test]
    fn first_lexicographic_strategy() {
        let sys = LinearSystem::new(2, &[vec![1, 1]], &[1]).unwrap();
        let g = build_synclcs_game(&sys, 1 << 10).unwrap();
        let (s, _) = find_perfect_deterministic(&g, 1000).unwrap();
        let s = s.unwrap();
        assert_eq!(g.output_vector(s.answer(0)).unwrap(), &v(2, &[1, 0]));
        assert!(is_perfect(&s, &g));
        assert!(game_value(&s, &g).unwrap().is_one());
    }

    #[test]
    fn one_eq_perfect_zero_answer() {
        let g = build_synclcs_game(&one_eq(), 1 << 10).unwrap();
        let zero = g.output_index(&v(2, &[0, 0])).unwrap();
        assert!(is_perfect(&DeterministicStrategy::new(vec![zero]), &g));
    }

    #[test]
    fn magic_square_has_no_perfect_strategy() {
        let g = build_synclcs_game(&magic_square(), 1 << 10).unwrap();
        let (s, stats) = find_perfect_deterministic(&g, 1 << 20).unwrap();
        assert!(s.is_none());
        assert!(stats.nodes > 0);
        let (best, value, _) = best_deterministic(&g, 1 << 20).unwrap();
        assert_eq!((value.wins, value.total), (34, 36));
        assert_eq!(value.reduced(), (17, 18));
        assert_eq!(game_value(&best, &g).unwrap(), value);
    }

    #[test]
    fn losing_everywhere_is_zero() {
        let g = build_synclcs_game(&magic_square(), 1 << 10).unwrap();
        let s = DeterministicStrategy::new(vec![g.losing_output(); 6]);
        assert_eq!(game_value(&s, &g).unwrap().wins, 0);
        assert!(!is_perfect(&s, &g));
    }

    #[test]
    fn empty_row_value_zero() {
        let sys = LinearSystem::new(2, &[vec![0, 0]], &[1]).unwrap();
        let g = build_synclcs_game(&sys, 16).unwrap();
        assert_eq!(g.num_outputs(), 1);
        assert!(find_perfect_deterministic(&g, 10).unwrap().0.is_none());
        let (_, value, _) = best_deterministic(&g, 10).unwrap();
        assert_eq!(value.wins, 0);
    }

    #[test]
    fn budget_is_reported() {
        let g = build_synclcs_game(&magic_square(), 1 << 10).unwrap();
        assert!(matches!(find_perfect_deterministic(&g, 5), Err(Error::SearchBudgetExceeded { budget: 5 })));
    }

    #[test]
    fn strategy_shape_checked() {
        let g = build_synclcs_game(&one_eq(), 16).unwrap();
        assert!(game_value(&DeterministicStrategy::new(vec![0, 0]), &g).is_err());
        assert!(!is_perfect(&DeterministicStrategy::new(vec![99]), &g));
    }
}
