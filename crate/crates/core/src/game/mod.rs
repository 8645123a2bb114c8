//! Nonlocal games, the MACs they induce, and winning-probability analytics.

mod bounds;
mod channel;

pub use bounds::{
    correlation_bound, deterministic_max_mi, istar_positive_w, mi_given_winning_vector,
    promise_free_winning_prob, quantum, WinningVector,
};
pub use channel::{assisted_mac, build_game_mac, Correlation, PostProcessing};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mac::{flatten, unflatten};

/// Largest `|questions| · |answers|` table a game may allocate.
const MAX_TABLE: usize = 1 << 26;

/// An N-player nonlocal game with a uniform question distribution.
///
/// Question and answer tuples are indexed row-major with player 1 slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonlocalGame {
    question_sizes: Vec<usize>,
    answer_sizes: Vec<usize>,
    winning: Vec<(usize, usize)>,
    table: Vec<bool>,
    promise: Option<Vec<usize>>,
}

impl NonlocalGame {
    /// Builds a game from an explicit list of winning
    /// `(question tuple, answer tuple)` pairs.
    pub fn new<I>(question_sizes: Vec<usize>, answer_sizes: Vec<usize>, winning: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Vec<usize>)>,
    {
        let mut game = Self::empty(question_sizes, answer_sizes)?;
        let answers = game.answer_tuples();
        for (n, (x, y)) in winning.into_iter().enumerate() {
            let q = tuple_index(&x, &game.question_sizes)
                .map_err(|e| Error::Validation(format!("winning entry {n}: question {e}")))?;
            let a = tuple_index(&y, &game.answer_sizes)
                .map_err(|e| Error::Validation(format!("winning entry {n}: answer {e}")))?;
            game.table[q * answers + a] = true;
        }
        game.refresh_winning();
        Ok(game)
    }

    /// Builds a game whose winning set is `{(x, y) : wins(x, y)}`.
    pub fn from_predicate(
        question_sizes: Vec<usize>,
        answer_sizes: Vec<usize>,
        wins: impl Fn(&[usize], &[usize]) -> bool,
    ) -> Result<Self> {
        let mut game = Self::empty(question_sizes, answer_sizes)?;
        let answers = game.answer_tuples();
        for q in 0..game.d() {
            let x = unflatten(q, &game.question_sizes);
            for a in 0..answers {
                game.table[q * answers + a] = wins(&x, &unflatten(a, &game.answer_sizes));
            }
        }
        game.refresh_winning();
        Ok(game)
    }

    fn empty(question_sizes: Vec<usize>, answer_sizes: Vec<usize>) -> Result<Self> {
        if question_sizes.len() < 2 {
            return Err(Error::Validation(format!(
                "a game needs at least two players, got {}",
                question_sizes.len()
            )));
        }
        if question_sizes.len() != answer_sizes.len() {
            return Err(Error::Validation(format!(
                "{} question alphabets but {} answer alphabets",
                question_sizes.len(),
                answer_sizes.len()
            )));
        }
        if question_sizes.contains(&0) || answer_sizes.contains(&0) {
            return Err(Error::Validation("alphabet sizes must be positive".into()));
        }
        let size = question_sizes
            .iter()
            .chain(&answer_sizes)
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .filter(|&s| s <= MAX_TABLE)
            .ok_or_else(|| Error::Refusal {
                what: "game table".into(),
                estimate: question_sizes
                    .iter()
                    .chain(&answer_sizes)
                    .fold(1u128, |acc, &s| acc.saturating_mul(s as u128)),
                ceiling: MAX_TABLE as u128,
            })?;
        Ok(Self {
            question_sizes,
            answer_sizes,
            winning: Vec::new(),
            table: vec![false; size],
            promise: None,
        })
    }

    fn refresh_winning(&mut self) {
        let answers = self.answer_tuples();
        self.winning = self
            .table
            .iter()
            .enumerate()
            .filter(|(_, &w)| w)
            .map(|(k, _)| (k / answers, k % answers))
            .collect();
    }

    /// Records the promise: the question tuples (by index) the game is
    /// really about. Questions outside the promise must be automatic wins.
    pub fn with_promise(mut self, mut questions: Vec<usize>) -> Result<Self> {
        questions.sort_unstable();
        questions.dedup();
        if let Some(&q) = questions.last() {
            if q >= self.d() {
                return Err(Error::Validation(format!("promise question {q} out of range")));
            }
        }
        self.promise = Some(questions);
        Ok(self)
    }

    pub fn players(&self) -> usize {
        self.question_sizes.len()
    }

    pub fn question_sizes(&self) -> &[usize] {
        &self.question_sizes
    }

    pub fn answer_sizes(&self) -> &[usize] {
        &self.answer_sizes
    }

    /// Number of question tuples `d = Π |X_i|`.
    pub fn d(&self) -> usize {
        self.question_sizes.iter().product()
    }

    /// Number of answer tuples `Π |Y_i|`.
    pub fn answer_tuples(&self) -> usize {
        self.answer_sizes.iter().product()
    }

    /// Sorted `(question index, answer index)` winning pairs.
    pub fn winning_pairs(&self) -> &[(usize, usize)] {
        &self.winning
    }

    pub fn promise(&self) -> Option<&[usize]> {
        self.promise.as_deref()
    }

    pub fn is_winning(&self, question: usize, answer: usize) -> bool {
        self.table[question * self.answer_tuples() + answer]
    }

    pub fn question_tuple(&self, index: usize) -> Vec<usize> {
        unflatten(index, &self.question_sizes)
    }

    pub fn answer_tuple(&self, index: usize) -> Vec<usize> {
        unflatten(index, &self.answer_sizes)
    }

    pub fn question_index(&self, tuple: &[usize]) -> usize {
        flatten(tuple, &self.question_sizes)
    }

    pub fn answer_index(&self, tuple: &[usize]) -> usize {
        flatten(tuple, &self.answer_sizes)
    }
}

fn tuple_index(tuple: &[usize], sizes: &[usize]) -> std::result::Result<usize, String> {
    if tuple.len() != sizes.len() {
        return Err(format!("tuple {tuple:?} has {} entries, expected {}", tuple.len(), sizes.len()));
    }
    if let Some((i, (&v, &s))) = tuple.iter().zip(sizes).enumerate().find(|(_, (v, s))| v >= s) {
        return Err(format!("tuple {tuple:?} entry {i} is {v}, alphabet size {s}"));
    }
    Ok(flatten(tuple, sizes))
}

/// The CHSH game: two binary questions and answers, win iff `x1 ∧ x2 = y1 ⊕ y2`.
pub fn chsh() -> NonlocalGame {
    NonlocalGame::from_predicate(vec![2, 2], vec![2, 2], |x, y| (x[0] & x[1]) == (y[0] ^ y[1]))
        .expect("valid game")
}

/// The magic square game. Player 1 gets a row, player 2 a column, and each
/// answers three bits (bit `j` of the answer is entry `j`). Rows must have
/// even parity, columns odd parity, and the shared cell must agree.
pub fn magic_square() -> NonlocalGame {
    let bit = |a: usize, j: usize| (a >> j) & 1;
    NonlocalGame::from_predicate(vec![3, 3], vec![8, 8], |x, y| {
        let (row, col) = (x[0], x[1]);
        y[0].count_ones() % 2 == 0 && y[1].count_ones() % 2 == 1 && bit(y[0], col) == bit(y[1], row)
    })
    .expect("valid game")
}

/// The promise-free multiparty parity game on `players` players. On the
/// promise (even number of 1 questions) the players win iff
/// `Σ y ≡ (Σ x)/2 (mod 2)`; off the promise they win automatically.
pub fn multiparty_parity(players: usize) -> Result<NonlocalGame> {
    if players < 2 {
        return Err(Error::Validation(format!("multiparty parity needs at least 2 players, got {players}")));
    }
    if players > 12 {
        return Err(Error::Refusal {
            what: "multiparty parity game table".into(),
            estimate: 1u128 << (2 * players),
            ceiling: MAX_TABLE as u128,
        });
    }
    let weight = |v: &[usize]| v.iter().sum::<usize>();
    let game = NonlocalGame::from_predicate(vec![2; players], vec![2; players], |x, y| {
        let wx = weight(x);
        wx % 2 == 1 || (weight(y) + wx / 2) % 2 == 0
    })?;
    let promise = (0..game.d()).filter(|&q| weight(&game.question_tuple(q)) % 2 == 0).collect();
    game.with_promise(promise)
}

/// The signalling game: player 1 must output player 2's question and vice
/// versa.
pub fn signalling(m1: usize, m2: usize) -> Result<NonlocalGame> {
    NonlocalGame::from_predicate(vec![m1, m2], vec![m2, m1], |x, y| y[0] == x[1] && y[1] == x[0])
}

/// Optimal deterministic strategy found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalStrategy {
    /// Winning probability under uniform questions.
    pub omega: f64,
    /// `answers[i][x_i]` is player `i`'s answer to question `x_i`.
    pub answers: Vec<Vec<usize>>,
}

/// Maximum winning probability over deterministic strategies, by exhaustive
/// enumeration of the `Π |Y_i|^{|X_i|}` strategies; ties go to the
/// lexicographically smallest strategy.
pub fn classical_winning_prob(game: &NonlocalGame, ceiling: u128) -> Result<ClassicalStrategy> {
    let all: Vec<usize> = (0..game.d()).collect();
    classical_over(game, &all, ceiling)
}

/// Like [`classical_winning_prob`], restricted to the game's promise.
pub fn classical_winning_prob_on_promise(game: &NonlocalGame, ceiling: u128) -> Result<ClassicalStrategy> {
    let promise = game
        .promise()
        .ok_or_else(|| Error::Validation("game has no promise".into()))?
        .to_vec();
    if promise.is_empty() {
        return Err(Error::Validation("promise is empty".into()));
    }
    classical_over(game, &promise, ceiling)
}

fn classical_over(game: &NonlocalGame, questions: &[usize], ceiling: u128) -> Result<ClassicalStrategy> {
    // One digit per (player, question), player 1 and question 0 most significant.
    let radices: Vec<usize> = game
        .question_sizes()
        .iter()
        .zip(game.answer_sizes())
        .flat_map(|(&x, &y)| std::iter::repeat(y).take(x))
        .collect();
    let count = radices
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
        .unwrap_or(u128::MAX);
    if count > ceiling {
        return Err(Error::Refusal {
            what: "classical strategy enumeration".into(),
            estimate: count,
            ceiling,
        });
    }
    let offsets: Vec<usize> = game
        .question_sizes()
        .iter()
        .scan(0, |acc, &x| {
            let start = *acc;
            *acc += x;
            Some(start)
        })
        .collect();
    let tuples: Vec<Vec<usize>> = questions.iter().map(|&q| game.question_tuple(q)).collect();
    let score = |index: u64| -> usize {
        let digits = unflatten(index as usize, &radices);
        tuples
            .iter()
            .zip(questions)
            .filter(|(x, &q)| {
                let answer: Vec<usize> =
                    x.iter().zip(&offsets).map(|(&xi, &off)| digits[off + xi]).collect();
                game.is_winning(q, game.answer_index(&answer))
            })
            .count()
    };
    let (wins, index) = (0..count as u64)
        .into_par_iter()
        .map(|i| (score(i), i))
        .reduce(|| (0, u64::MAX), |a, b| match a.0.cmp(&b.0) {
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Equal => (a.0, a.1.min(b.1)),
        });
    let digits = unflatten(index as usize, &radices);
    let answers = game
        .question_sizes()
        .iter()
        .zip(&offsets)
        .map(|(&x, &off)| digits[off..off + x].to_vec())
        .collect();
    Ok(ClassicalStrategy { omega: wins as f64 / questions.len() as f64, answers })
}

/// Fraction of question tuples that admit at least one winning answer.
pub fn full_communication_winning_prob(game: &NonlocalGame) -> f64 {
    let answers = game.answer_tuples();
    let won = (0..game.d())
        .filter(|&q| (0..answers).any(|a| game.is_winning(q, a)))
        .count();
    won as f64 / game.d() as f64
}
