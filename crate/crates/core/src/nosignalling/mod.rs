//! The no-signalling polytope of a nonlocal game and the linear program for
//! its optimal winning probability.

mod simplex;

pub use simplex::{LinearProgram, LpSolution};

use crate::error::{Error, Result};
use crate::game::NonlocalGame;

/// Default ceiling on the number of LP variables `|X|·|Y|`.
pub const DEFAULT_NS_VARIABLE_CEILING: u128 = 8192;

const RANK_TOL: f64 = 1e-9;

/// Conditional answer distributions, one block of `|Y|` entries per
/// question tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyVector {
    block: usize,
    v: Vec<f64>,
}

impl StrategyVector {
    pub fn new(block: usize, v: Vec<f64>) -> Result<Self> {
        if block == 0 || v.len() % block != 0 {
            return Err(Error::Validation("strategy length is not a multiple of the block size".into()));
        }
        for (q, chunk) in v.chunks(block).enumerate() {
            let total: f64 = chunk.iter().sum();
            if chunk.iter().any(|x| *x < -1e-8) || (total - 1.0).abs() > 1e-8 {
                return Err(Error::Validation(format!("block {q} is not a distribution")));
            }
        }
        Ok(Self { block, v })
    }

    pub fn entries(&self) -> &[f64] {
        &self.v
    }

    pub fn block(&self, question: usize) -> &[f64] {
        &self.v[question * self.block..(question + 1) * self.block]
    }
}

/// Linear constraints describing the no-signalling behaviours of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct NsConstraintSystem {
    /// Number of question tuples (blocks).
    pub blocks: usize,
    /// Number of answer tuples per block.
    pub block_size: usize,
    /// Independent marginal-equality rows (each sums to zero).
    pub equality_rows: Vec<Vec<f64>>,
    /// Marginal-equality rows before redundancy removal.
    pub raw_rows: usize,
    /// `1/d` on winning coordinates.
    pub objective: Vec<f64>,
}

impl NsConstraintSystem {
    pub fn variables(&self) -> usize {
        self.blocks * self.block_size
    }

    /// Rows `Σ_a v[q, a] = 1`, one per block.
    pub fn block_rows(&self) -> Vec<Vec<f64>> {
        (0..self.blocks)
            .map(|q| {
                let mut row = vec![0.0; self.variables()];
                row[q * self.block_size..(q + 1) * self.block_size].iter_mut().for_each(|v| *v = 1.0);
                row
            })
            .collect()
    }
}

/// Reduced row-echelon accumulator used to discard dependent rows.
struct RowSpace {
    pivots: Vec<(usize, Vec<f64>)>,
}

impl RowSpace {
    fn insert(&mut self, row: &[f64]) -> bool {
        let mut r = row.to_vec();
        for (col, basis) in &self.pivots {
            let f = r[*col];
            if f != 0.0 {
                r.iter_mut().zip(basis).for_each(|(v, b)| *v -= f * b);
            }
        }
        let Some((col, &lead)) = r
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .filter(|(_, v)| v.abs() > RANK_TOL)
        else {
            return false;
        };
        r.iter_mut().for_each(|v| *v /= lead);
        for (_, basis) in self.pivots.iter_mut() {
            let f = basis[col];
            if f != 0.0 {
                basis.iter_mut().zip(&r).for_each(|(b, v)| *b -= f * v);
            }
        }
        self.pivots.push((col, r));
        true
    }
}

/// Builds the simplex and marginal-equality constraints: for every player
/// `i`, question `x_i` and answer `y_i`, the marginal of `y_i` must not
/// depend on the other players' questions.
pub fn build_ns_system(game: &NonlocalGame, ceiling: u128) -> Result<NsConstraintSystem> {
    let blocks = game.d();
    let block_size = game.answer_tuples();
    let n = blocks * block_size;
    if n as u128 > ceiling {
        return Err(Error::Refusal {
            what: "no-signalling linear program".into(),
            estimate: n as u128,
            ceiling,
        });
    }
    let mut rows = Vec::new();
    let questions: Vec<Vec<usize>> = (0..blocks).map(|q| game.question_tuple(q)).collect();
    let answers: Vec<Vec<usize>> = (0..block_size).map(|a| game.answer_tuple(a)).collect();
    for player in 0..game.players() {
        for xi in 0..game.question_sizes()[player] {
            let same: Vec<usize> = (0..blocks).filter(|&q| questions[q][player] == xi).collect();
            for yi in 0..game.answer_sizes()[player] {
                for pair in same.windows(2) {
                    let mut row = vec![0.0; n];
                    for (a, at) in answers.iter().enumerate() {
                        if at[player] == yi {
                            row[pair[0] * block_size + a] += 1.0;
                            row[pair[1] * block_size + a] -= 1.0;
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    let raw_rows = rows.len();
    let mut space = RowSpace { pivots: Vec::new() };
    let blank = NsConstraintSystem {
        blocks,
        block_size,
        equality_rows: Vec::new(),
        raw_rows,
        objective: Vec::new(),
    };
    for row in blank.block_rows() {
        space.insert(&row);
    }
    let equality_rows = rows.into_iter().filter(|r| space.insert(r)).collect();
    let mut objective = vec![0.0; n];
    for &(q, a) in game.winning_pairs() {
        objective[q * block_size + a] = 1.0 / blocks as f64;
    }
    Ok(NsConstraintSystem { equality_rows, objective, ..blank })
}

/// Optimal no-signalling winning probability under uniform questions and an
/// optimal behaviour.
pub fn max_ns_winning_prob(game: &NonlocalGame, ceiling: u128) -> Result<(f64, StrategyVector)> {
    let system = build_ns_system(game, ceiling)?;
    let mut a_eq = system.block_rows();
    let mut b_eq = vec![1.0; a_eq.len()];
    a_eq.extend(system.equality_rows.iter().cloned());
    b_eq.resize(a_eq.len(), 0.0);
    let lp = LinearProgram { objective: system.objective.clone(), a_eq, b_eq };
    let solution = lp.maximize()?;
    let strategy = StrategyVector::new(system.block_size, solution.x)
        .map_err(|e| Error::Numerical(format!("optimal vertex failed validation: {e}")))?;
    Ok((solution.value, strategy))
}
