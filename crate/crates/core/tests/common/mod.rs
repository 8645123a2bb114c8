#![allow(dead_code)]

use std::collections::BTreeSet;

use macap::capacity::inner_capacity;
use macap::entropy::{Base, ProbabilityVector};
use macap::game::{classical_winning_prob, full_communication_winning_prob, NonlocalGame, WinningVector};
use macap::game::{istar_positive_w, mi_given_winning_vector};
use macap::mac::mutual_information;
use macap::nosignalling::{max_ns_winning_prob, DEFAULT_NS_VARIABLE_CEILING};
use macap::optimize::{maximize_1d, Bracket, SawtoothSearch, StepStatus};
use macap::{largest_step, Mac, Modulus, SimplexCurve, SimplexGrid, Stop};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_distribution(rng: &mut TestRng, d: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..d)
        .map(|_| {
            if rng.gen_bool(0.15) {
                0.0
            } else {
                -rng.gen_range(1e-12f64..1.0).ln()
            }
        })
        .collect();
    if v.iter().all(|&x| x == 0.0) {
        v[rng.gen_range(0..d)] = 1.0;
    }
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= total);
    v
}

pub fn random_pv(rng: &mut TestRng, d: usize) -> ProbabilityVector {
    ProbabilityVector::new(random_distribution(rng, d)).unwrap()
}

/// Random two-sender channel with stochastic columns and occasional zeros.
pub fn random_mac(rng: &mut TestRng, d1: usize, d2: usize, dout: usize) -> Mac {
    let columns: Vec<Vec<f64>> = (0..d1 * d2).map(|_| random_distribution(rng, dout)).collect();
    Mac::from_fn(d1, d2, dout, |z, b1, b2| columns[b1 * d2 + b2][z]).unwrap()
}

/// All count vectors `n ∈ ℕ^d` with `Σ n = total`, by recursion.
pub fn compositions(d: usize, total: u64) -> Vec<Vec<u64>> {
    if d == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(d - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Calls `f` on every point of the simplex lattice with spacing `1/steps`.
pub fn for_each_lattice_point(d: usize, steps: u64, mut f: impl FnMut(&[f64])) {
    fn rec(d: usize, left: u64, steps: u64, prefix: &mut Vec<f64>, f: &mut dyn FnMut(&[f64])) {
        if d == 1 {
            prefix.push(left as f64 / steps as f64);
            f(prefix);
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k as f64 / steps as f64);
            rec(d - 1, left - k, steps, prefix, f);
            prefix.pop();
        }
    }
    rec(d, steps, steps, &mut Vec::with_capacity(d), &mut f);
}

pub fn l1(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
}

/// `f(x) = Σ a_k sin(ω_k x + φ_k)` with Lipschitz constant `Σ |a_k ω_k|`.
#[derive(Debug, Clone)]
pub struct SineMix {
    pub terms: Vec<(f64, f64, f64)>,
}

impl SineMix {
    pub fn random(rng: &mut TestRng) -> Self {
        let n = rng.gen_range(1..=4);
        let terms = (0..n)
            .map(|_| {
                (
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.5..12.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        Self { terms }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|(a, w, p)| a * (w * x + p).sin()).sum()
    }

    pub fn lipschitz(&self) -> f64 {
        self.terms.iter().map(|(a, w, _)| (a * w).abs()).sum::<f64>().max(1e-3)
    }

    pub fn sampled_max(&self, a: f64, b: f64) -> f64 {
        (0..=20_000)
            .map(|i| self.eval(a + (b - a) * i as f64 / 20_000.0))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// After every step the sawtooth envelope dominates `f` on a sample grid and
/// the reported bound dominates the sampled maximum.
pub fn check_sawtooth_soundness(f: &SineMix, eps: f64) -> Result<(), String> {
    let beta = Modulus::Linear(f.lipschitz());
    let (a, b) = (0.0, 1.0);
    let sampled = f.sampled_max(a, b);
    let mut search =
        SawtoothSearch::new(|x| Ok(Bracket::exact(f.eval(x))), &beta, a, b, Some(eps)).map_err(|e| e.to_string())?;
    for _ in 0..400 {
        for i in 0..=200 {
            let q = a + (b - a) * i as f64 / 200.0;
            let env = search.envelope(q);
            if env < f.eval(q) - 1e-9 {
                return Err(format!("envelope {env} below f({q}) = {}", f.eval(q)));
            }
        }
        if search.upper_bound() < sampled - 1e-9 {
            return Err(format!("bound {} below sampled max {sampled}", search.upper_bound()));
        }
        match search.step().map_err(|e| e.to_string())? {
            StepStatus::Advanced { gap } if gap <= eps => break,
            StepStatus::Advanced { .. } => {}
            StepStatus::Exhausted => break,
        }
    }
    Ok(())
}

/// The precision-stopped search stays within `⌈(b - a)/δ⌉` iterations and
/// is `ε`-accurate.
pub fn check_iteration_ceiling(f: &SineMix, eps: f64) -> Result<(), String> {
    let beta = Modulus::Linear(f.lipschitz());
    let (a, b) = (0.0, 1.0);
    let out = maximize_1d(|x| f.eval(x), &beta, a, b, Stop::Precision(eps)).map_err(|e| e.to_string())?;
    let delta = largest_step(&beta, eps / 2.0, b - a).map_err(|e| e.to_string())?;
    let ceiling = ((b - a) / delta).ceil() as usize;
    if out.iterations > ceiling {
        return Err(format!("{} iterations exceed the ceiling {ceiling}", out.iterations));
    }
    let sampled = f.sampled_max(a, b);
    if out.best_value < sampled - eps - 1e-12 || !out.converged {
        return Err(format!("best {} vs sampled max {sampled}", out.best_value));
    }
    if out.upper_bound < sampled - 1e-9 {
        return Err(format!("upper bound {} below sampled max {sampled}", out.upper_bound));
    }
    Ok(())
}

pub fn check_grid_adjacency(d: usize, n: u64) -> Result<(), String> {
    let grid = SimplexGrid::new(d, n).map_err(|e| e.to_string())?;
    let mut prev = grid.counts(0).map_err(|e| e.to_string())?;
    for i in 1..grid.size() {
        let cur = grid.counts(i).map_err(|e| e.to_string())?;
        let moved: u64 = prev.iter().zip(&cur).map(|(a, b)| a.abs_diff(*b)).sum();
        if moved != 2 {
            return Err(format!("d={d} N={n}: points {} and {i} are {moved}/N apart", i - 1));
        }
        prev = cur;
    }
    Ok(())
}

pub fn check_grid_completeness(d: usize, n: u64) -> Result<(), String> {
    let grid = SimplexGrid::new(d, n).map_err(|e| e.to_string())?;
    let listed: Vec<Vec<u64>> = (0..grid.size()).map(|i| grid.counts(i).unwrap()).collect();
    let set: BTreeSet<Vec<u64>> = listed.iter().cloned().collect();
    let expected: BTreeSet<Vec<u64>> = compositions(d, n).into_iter().collect();
    if set.len() != listed.len() || set != expected {
        return Err(format!("d={d} N={n}: enumeration differs from the lattice"));
    }
    Ok(())
}

/// Random simplex points lie within `2(d-1)/N` of the sampled curve.
pub fn check_curve_density(rng: &mut TestRng, d: usize, n: u64, points: usize) -> Result<(), String> {
    let curve = SimplexCurve::new(SimplexGrid::new(d, n).unwrap()).unwrap();
    let samples = 40_000;
    let trace: Vec<Vec<f64>> = (0..=samples)
        .map(|i| curve.point(curve.length() * i as f64 / samples as f64).unwrap().into_inner())
        .collect();
    let radius = 2.0 * (d as f64 - 1.0) / n as f64;
    for _ in 0..points {
        let x = random_distribution(rng, d);
        let nearest = trace.iter().map(|y| l1(&x, y)).fold(f64::INFINITY, f64::min);
        if nearest > radius + 1e-9 {
            return Err(format!("{x:?} is {nearest} from the curve (radius {radius})"));
        }
    }
    Ok(())
}

/// Fine-lattice maximization of `I(·, q)` over the first sender's simplex.
pub fn lattice_inner_max(mac: &Mac, q: &ProbabilityVector, steps: u64) -> f64 {
    let d1 = mac.input_sizes()[0];
    let channel = macap::mac::effective_channel(mac, q).unwrap();
    let mut best = f64::NEG_INFINITY;
    for_each_lattice_point(d1, steps, |p| best = best.max(channel.objective(p)));
    best
}

pub fn lattice_steps(d1: usize) -> u64 {
    match d1 {
        1..=3 => 1000,
        _ => 300,
    }
}

pub fn check_inner_oracle(mac: &Mac, q: &ProbabilityVector) -> Result<(), String> {
    let d1 = mac.input_sizes()[0];
    let solved = inner_capacity(mac, q, 1e-8).map_err(|e| e.to_string())?;
    let oracle = lattice_inner_max(mac, q, lattice_steps(d1));
    if (solved.value - oracle).abs() > 2e-3 || solved.value < oracle - 1e-8 {
        return Err(format!("solver {} vs lattice {oracle} (d1={d1})", solved.value));
    }
    Ok(())
}

/// `|I(p, q) - I(p, q')| ≤ β_I(‖q - q'‖₁)` for fixed `p`.
pub fn check_mi_lipschitz(mac: &Mac, p: &ProbabilityVector, q: &ProbabilityVector, q2: &ProbabilityVector) -> Result<(), String> {
    let a = mutual_information(mac, p, q, Base::Nats).map_err(|e| e.to_string())?;
    let b = mutual_information(mac, p, q2, Base::Nats).map_err(|e| e.to_string())?;
    let bound = mac.beta_i_modulus().eval(l1(q, q2));
    if (a - b).abs() > bound + 1e-9 {
        return Err(format!("|{a} - {b}| exceeds β_I = {bound}"));
    }
    Ok(())
}

/// Random game with at most two questions and three answers per player.
pub fn random_game(rng: &mut TestRng) -> NonlocalGame {
    let players = if rng.gen_bool(0.2) { 3 } else { 2 };
    let questions: Vec<usize> = (0..players).map(|_| rng.gen_range(1..=2)).collect();
    let answers: Vec<usize> = (0..players)
        .map(|_| if players == 3 { 2 } else { rng.gen_range(2..=3) })
        .collect();
    let density = rng.gen_range(0.1..0.6);
    let mut draws = Vec::new();
    let total_q: usize = questions.iter().product();
    let total_a: usize = answers.iter().product();
    for _ in 0..total_q * total_a {
        draws.push(rng.gen_bool(density));
    }
    let flat = |t: &[usize], sizes: &[usize]| t.iter().zip(sizes).fold(0, |acc, (v, s)| acc * s + v);
    let (qs, asz) = (questions.clone(), answers.clone());
    NonlocalGame::from_predicate(questions, answers, |x, y| draws[flat(x, &qs) * total_a + flat(y, &asz)])
        .unwrap()
}

/// `ω_cl ≤ ω_NS ≤ ω_full`, with a valid no-signalling behaviour whose
/// winning vector averages to the LP optimum.
pub fn check_lp_hierarchy(game: &NonlocalGame) -> Result<(), String> {
    let classical = classical_winning_prob(game, 10_000_000).map_err(|e| e.to_string())?.omega;
    let (ns, strategy) = max_ns_winning_prob(game, DEFAULT_NS_VARIABLE_CEILING).map_err(|e| e.to_string())?;
    let full = full_communication_winning_prob(game);
    if classical > ns + 1e-9 || ns > full + 1e-9 {
        return Err(format!("hierarchy broken: {classical} / {ns} / {full}"));
    }
    check_no_signalling(game, strategy.entries())?;
    let w = WinningVector::from_behaviour(game, strategy.entries()).map_err(|e| e.to_string())?;
    if (w.mean() - ns).abs() > 1e-8 {
        return Err(format!("winning vector mean {} vs LP optimum {ns}", w.mean()));
    }
    Ok(())
}

/// Blocks are distributions and every player's marginal ignores the other
/// players' questions.
pub fn check_no_signalling(game: &NonlocalGame, v: &[f64]) -> Result<(), String> {
    let answers = game.answer_tuples();
    for q in 0..game.d() {
        let block = &v[q * answers..(q + 1) * answers];
        let total: f64 = block.iter().sum();
        if (total - 1.0).abs() > 1e-8 || block.iter().any(|&x| x < -1e-9) {
            return Err(format!("block {q} is not a distribution: {block:?}"));
        }
    }
    for player in 0..game.players() {
        for q in 0..game.d() {
            let xi = game.question_tuple(q)[player];
            let reference = (0..game.d()).find(|&r| game.question_tuple(r)[player] == xi).unwrap();
            for yi in 0..game.answer_sizes()[player] {
                let marginal = |question: usize| -> f64 {
                    (0..answers)
                        .filter(|&a| game.answer_tuple(a)[player] == yi)
                        .map(|a| v[question * answers + a])
                        .sum()
                };
                let (m, r) = (marginal(q), marginal(reference));
                if (m - r).abs() > 1e-8 {
                    return Err(format!("player {player} signals: question {q} gives {m}, {reference} gives {r}"));
                }
            }
        }
    }
    Ok(())
}

/// Lattice maximization of the winning-vector mutual information.
pub fn lattice_mi_max(w: &WinningVector, steps: u64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for_each_lattice_point(w.d(), steps, |pi| {
        let pv = ProbabilityVector::new(pi.to_vec()).unwrap();
        best = best.max(mi_given_winning_vector(w, &pv).unwrap());
    });
    best
}

pub fn check_istar_lattice(w: &WinningVector) -> Result<(), String> {
    let formula = istar_positive_w(w).map_err(|e| e.to_string())?;
    let steps = if w.d() <= 3 { 600 } else { 150 };
    let oracle = lattice_mi_max(w, steps);
    if (formula - oracle).abs() > 5e-3 {
        return Err(format!("formula {formula} vs lattice {oracle} for {:?}", w.entries()));
    }
    Ok(())
}
