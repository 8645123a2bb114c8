use super::NonlocalGame;
use crate::entropy::PROB_TOL;
use crate::error::{Error, Result};
use crate::mac::{unflatten, Mac};

/// Per-player MAC input sizes `|X_i|·|Y_i|`; input `b_i = x_i·|Y_i| + y_i`.
fn input_sizes(game: &NonlocalGame) -> Vec<usize> {
    game.question_sizes().iter().zip(game.answer_sizes()).map(|(x, y)| x * y).collect()
}

/// Splits a joint MAC input into question and answer tuple indices.
fn split_input(game: &NonlocalGame, sizes: &[usize], joint: usize) -> (usize, usize) {
    let digits = unflatten(joint, sizes);
    let x: Vec<usize> = digits.iter().zip(game.answer_sizes()).map(|(b, y)| b / y).collect();
    let y: Vec<usize> = digits.iter().zip(game.answer_sizes()).map(|(b, y)| b % y).collect();
    (game.question_index(&x), game.answer_index(&y))
}

/// The game MAC: each sender inputs a (question, answer) pair; the receiver
/// sees the question tuple noiselessly when the answers win and a uniformly
/// random question tuple otherwise.
pub fn build_game_mac(game: &NonlocalGame) -> Result<Mac> {
    let sizes = input_sizes(game);
    let joint: usize = sizes.iter().product();
    let d = game.d();
    let mut t = vec![0.0; d * joint];
    for b in 0..joint {
        let (x, y) = split_input(game, &sizes, b);
        if game.is_winning(x, y) {
            t[x * joint + b] = 1.0;
        } else {
            for z in 0..d {
                t[z * joint + b] = 1.0 / d as f64;
            }
        }
    }
    Mac::new(sizes, d, t)
}

/// A shared correlation `P(y' | x, y)` over answer tuples, conditioned on the
/// joint MAC input.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    inputs: usize,
    answers: usize,
    table: Vec<f64>,
}

impl Correlation {
    /// `table[input · answers + y']`, one conditional distribution per joint
    /// MAC input.
    pub fn new(game: &NonlocalGame, table: Vec<f64>) -> Result<Self> {
        let inputs: usize = input_sizes(game).iter().product();
        let answers = game.answer_tuples();
        if table.len() != inputs * answers {
            return Err(Error::Validation(format!(
                "correlation has {} entries, expected {}",
                table.len(),
                inputs * answers
            )));
        }
        for i in 0..inputs {
            let row = &table[i * answers..(i + 1) * answers];
            let total: f64 = row.iter().sum();
            if row.iter().any(|v| !(*v >= 0.0)) || (total - 1.0).abs() > PROB_TOL {
                return Err(Error::Validation(format!(
                    "correlation row for input {i} is not a distribution"
                )));
            }
        }
        Ok(Self { inputs, answers, table })
    }

    /// A correlation that depends only on the question tuple:
    /// `P(y' | x, y) = p(x, y')`.
    pub fn from_questions(
        game: &NonlocalGame,
        p: impl Fn(&[usize], &[usize]) -> f64,
    ) -> Result<Self> {
        let sizes = input_sizes(game);
        let inputs: usize = sizes.iter().product();
        let answers = game.answer_tuples();
        let mut table = Vec::with_capacity(inputs * answers);
        for b in 0..inputs {
            let (x, _) = split_input(game, &sizes, b);
            let xt = game.question_tuple(x);
            for a in 0..answers {
                table.push(p(&xt, &game.answer_tuple(a)));
            }
        }
        Self::new(game, table)
    }

    /// The PR box `P(y'|x) = ½ δ(x1 ∧ x2, y'1 ⊕ y'2)` for a two-player game
    /// with binary questions and answers.
    pub fn pr_box(game: &NonlocalGame) -> Result<Self> {
        if game.question_sizes() != [2, 2] || game.answer_sizes() != [2, 2] {
            return Err(Error::Validation("the PR box needs binary questions and answers for two players".into()));
        }
        Self::from_questions(game, |x, y| {
            if (x[0] & x[1]) == (y[0] ^ y[1]) { 0.5 } else { 0.0 }
        })
    }

    pub fn probability(&self, input: usize, answer: usize) -> f64 {
        self.table[input * self.answers + answer]
    }
}

/// Local post-processing `f_i(ȳ_i | x_i, y_i, y'_i)` for every player.
#[derive(Debug, Clone, PartialEq)]
pub struct PostProcessing {
    tables: Vec<Vec<f64>>,
}

impl PostProcessing {
    /// `tables[i][((x·|Y_i| + y)·|Y_i| + y')·|Y_i| + ȳ]`.
    pub fn new(game: &NonlocalGame, tables: Vec<Vec<f64>>) -> Result<Self> {
        if tables.len() != game.players() {
            return Err(Error::Validation(format!(
                "{} post-processing tables for {} players",
                tables.len(),
                game.players()
            )));
        }
        for (i, (t, (&xs, &ys))) in tables
            .iter()
            .zip(game.question_sizes().iter().zip(game.answer_sizes()))
            .enumerate()
        {
            if t.len() != xs * ys * ys * ys {
                return Err(Error::Validation(format!("post-processing table {i} has the wrong size")));
            }
            for slice in t.chunks(ys) {
                let total: f64 = slice.iter().sum();
                if slice.iter().any(|v| !(*v >= 0.0)) || (total - 1.0).abs() > PROB_TOL {
                    return Err(Error::Validation(format!(
                        "post-processing table {i} has a slice that is not a distribution"
                    )));
                }
            }
        }
        Ok(Self { tables })
    }

    fn from_rule(game: &NonlocalGame, pick: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let tables = game
            .question_sizes()
            .iter()
            .zip(game.answer_sizes())
            .map(|(&xs, &ys)| {
                let mut t = vec![0.0; xs * ys * ys * ys];
                for x in 0..xs {
                    for y in 0..ys {
                        for yp in 0..ys {
                            t[((x * ys + y) * ys + yp) * ys + pick(y, yp)] = 1.0;
                        }
                    }
                }
                t
            })
            .collect();
        Self::new(game, tables)
    }

    /// Each player outputs the shared answer: `ȳ_i = y'_i`.
    pub fn pass_through(game: &NonlocalGame) -> Result<Self> {
        Self::from_rule(game, |_, yp| yp)
    }

    /// Each player keeps its own answer: `ȳ_i = y_i`.
    pub fn identity(game: &NonlocalGame) -> Result<Self> {
        Self::from_rule(game, |y, _| y)
    }
}

/// The game MAC preceded by the correlation-assistance channel
/// `A(x̄ȳ | xy) = δ(x̄, x) Σ_{y'} Π_i f_i(ȳ_i | x_i, y_i, y'_i) P(y' | xy)`.
pub fn assisted_mac(game: &NonlocalGame, corr: &Correlation, post: &PostProcessing) -> Result<Mac> {
    let sizes = input_sizes(game);
    let joint: usize = sizes.iter().product();
    let answers = game.answer_tuples();
    if corr.inputs != joint || corr.answers != answers {
        return Err(Error::Validation("correlation does not match the game".into()));
    }
    if post.tables.len() != game.players() {
        return Err(Error::Validation("post-processing does not match the game".into()));
    }
    let base = build_game_mac(game)?;
    let d = game.d();
    let ys = game.answer_sizes();
    let answer_tuples: Vec<Vec<usize>> = (0..answers).map(|a| game.answer_tuple(a)).collect();
    let mut t = vec![0.0; d * joint];
    let mut mix = vec![0.0; answers];
    for b in 0..joint {
        let (x, y) = split_input(game, &sizes, b);
        let (xt, yt) = (game.question_tuple(x), &answer_tuples[y]);
        mix.iter_mut().for_each(|m| *m = 0.0);
        for (yp, ypt) in answer_tuples.iter().enumerate() {
            let weight = corr.probability(b, yp);
            if weight == 0.0 {
                continue;
            }
            for (ybar, ybart) in answer_tuples.iter().enumerate() {
                let local: f64 = (0..game.players())
                    .map(|i| {
                        let n = ys[i];
                        post.tables[i][((xt[i] * n + yt[i]) * n + ypt[i]) * n + ybart[i]]
                    })
                    .product();
                mix[ybar] += weight * local;
            }
        }
        let b_digits_base: Vec<usize> = xt.iter().zip(ys).map(|(x, n)| x * n).collect();
        for (ybar, &m) in mix.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            let inner = b_digits_base
                .iter()
                .zip(&answer_tuples[ybar])
                .zip(&sizes)
                .fold(0, |acc, ((base, y), s)| acc * s + base + y);
            for z in 0..d {
                t[z * joint + b] += m * base.entry(z, inner);
            }
        }
    }
    Mac::new(sizes, d, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{chsh, magic_square};

    #[test]
    fn chsh_mac_entries() {
        let mac = build_game_mac(&chsh()).unwrap();
        assert_eq!(mac.input_sizes(), &[4, 4]);
        assert_eq!(mac.dout(), 4);
        // x = (0,0), y = (0,0): inputs b1 = 0, b2 = 0.
        assert_eq!(mac.get(0, 0, 0), 1.0);
        // x = (1,1), y = (0,0): inputs b1 = 2, b2 = 2.
        for z in 0..4 {
            assert_eq!(mac.get(z, 2, 2), 0.25);
        }
    }

    #[test]
    fn magic_square_sizes() {
        let mac = build_game_mac(&magic_square()).unwrap();
        assert_eq!(mac.input_sizes(), &[24, 24]);
        assert_eq!(mac.dout(), 9);
    }

    #[test]
    fn pr_box_makes_questions_noiseless() {
        let g = chsh();
        let mac = assisted_mac(
            &g,
            &Correlation::pr_box(&g).unwrap(),
            &PostProcessing::pass_through(&g).unwrap(),
        )
        .unwrap();
        for b in 0..16 {
            let (x, _) = split_input(&g, &[4, 4], b);
            for z in 0..4 {
                let expected = if z == x { 1.0 } else { 0.0 };
                assert!((mac.entry(z, b) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn identity_assistance_is_transparent() {
        let g = chsh();
        let corr = Correlation::from_questions(&g, |_, _| 0.25).unwrap();
        let mac = assisted_mac(&g, &corr, &PostProcessing::identity(&g).unwrap()).unwrap();
        assert_eq!(mac, build_game_mac(&g).unwrap());
    }
}
