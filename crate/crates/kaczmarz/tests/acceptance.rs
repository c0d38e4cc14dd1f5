//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! measured values and runtime; the process exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use kaczmarz::bench::{self, calibrate, timed_run, Calibration};
use kaczmarz::campaign::{self, CampaignConfig};
use kaczmarz::cli;
use kaczmarz::io::{self, Sidecar};
use kaczmarz_core::datasets::{gen_ds2, least_squares_solution};
use kaczmarz_core::linalg::{
    dist_sq, matvec, matvec_transpose, max_consecutive_angle, norm_sq, project_row, residual,
};
use kaczmarz_core::rng::Prng;
use kaczmarz_core::sampling::{
    quasirandom_row, radical_inverse, ColumnWeighted, Cyclic, Greedy, Halton, NormWeighted,
    OrthogonalityPattern, SelectableSet, ShufflePolicy, Sobol, WithoutReplacement,
};
use kaczmarz_core::solvers::{
    self, check_convergence, engine, rka_optimal_alpha, Engine, RgsEngine,
};
use kaczmarz_core::{
    DatasetSpec, DenseMatrix, DenseSystem, Family, GeneratedSystem, Method, SelectorKind,
    SolverConfig,
};

const EPSILON: f64 = 1e-8;
const CAP: u64 = 10_000_000;
const MASTER: u64 = 0x5eed;

// ---------------------------------------------------------------- oracles

/// Eigenvalues of a symmetric `n × n` matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(mut s: Vec<f64>, n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i * n + j] * s[i * n + j])
            .sum();
        let diag: f64 = (0..n).map(|i| s[i * n + i] * s[i * n + i]).sum();
        if off <= 1e-30 * diag {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = s[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (s[q * n + q] - s[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let skp = s[k * n + p];
                    let skq = s[k * n + q];
                    s[k * n + p] = c * skp - sn * skq;
                    s[k * n + q] = sn * skp + c * skq;
                }
                for k in 0..n {
                    let spk = s[p * n + k];
                    let sqk = s[q * n + k];
                    s[p * n + k] = c * spk - sn * sqk;
                    s[q * n + k] = sn * spk + c * sqk;
                }
            }
        }
    }
    (0..n).map(|i| s[i * n + i]).collect()
}

/// `AᵀA` and `Aᵀb` by explicit loops.
fn normal_equations(a: &DenseMatrix, b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (a.rows(), a.cols());
    let mut g = vec![0.0; n * n];
    let mut c = vec![0.0; n];
    for i in 0..m {
        for j in 0..n {
            c[j] += a.get(i, j) * b[i];
            for k in 0..n {
                g[j * n + k] += a.get(i, j) * a.get(i, k);
            }
        }
    }
    (g, c)
}

/// Solves `G x = c` for symmetric positive definite `G` by Cholesky.
fn cholesky_solve(g: &[f64], c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
            if i == j {
                l[i * n + i] = (g[i * n + i] - s).sqrt();
            } else {
                l[i * n + j] = (g[i * n + j] - s) / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
        y[i] = (c[i] - s) / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k * n + i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i * n + i];
    }
    x
}

/// Radical inverse in base 2 as an exact dyadic fraction.
fn van_der_corput(mut i: u64) -> f64 {
    let mut num = 0u64;
    let mut den = 1u64;
    while i > 0 {
        num = 2 * num + (i & 1);
        den *= 2;
        i >>= 1;
    }
    num as f64 / den as f64
}

/// First Sobol coordinate at index `i`: the base-2 radical inverse of the
/// Gray code of `i`.
fn sobol_gray(i: u64) -> f64 {
    van_der_corput(i ^ (i >> 1))
}

// ---------------------------------------------------------------- helpers

fn generate(family: Family, m: usize, n: usize, seed: u64) -> GeneratedSystem {
    GeneratedSystem::generate(&DatasetSpec::new(family, m, n, seed)).unwrap()
}

fn calibrated_k(g: &GeneratedSystem, method: Method, seeds: usize) -> u64 {
    let cal = calibrate(
        &g.system,
        &SolverConfig::new(method, 1),
        g.reference(),
        EPSILON,
        &bench::run_seeds(MASTER, seeds),
        CAP,
    )
    .unwrap();
    cal.k()
        .unwrap_or_else(|| panic!("{method} did not converge: {cal:?}"))
}

fn mean(v: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = v.into_iter().collect();
    v.iter().sum::<f64>() / v.len() as f64
}

/// Collects failed example descriptions instead of stopping at the first.
#[derive(Default)]
struct Checks {
    total: usize,
    failed: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: &str) {
        self.total += 1;
        if !ok {
            self.failed.push(what.to_string());
        }
    }

    fn close(&mut self, got: f64, want: f64, tol: f64, what: &str) {
        self.check(
            (got - want).abs() <= tol,
            &format!("{what}: got {got}, want {want}"),
        );
    }

    fn frequencies(&mut self, counts: &[u64], p: &[f64], what: &str) {
        let draws: u64 = counts.iter().sum();
        for (i, (&c, &p)) in counts.iter().zip(p).enumerate() {
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            self.check(
                (c as f64 - draws as f64 * p).abs() <= 4.0 * sigma,
                &format!("{what}: index {i} drawn {c} times"),
            );
        }
    }
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["kzm"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn cli_value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .map(str::trim)
        .unwrap_or("")
}

// ------------------------------------------------------------- criteria

fn linalg_examples(c: &mut Checks) {
    let m = |rows: &[&[f64]]| DenseMatrix::from_rows(rows).unwrap();

    let g = generate(Family::Ds1, 30, 7, 1);
    let a = &g.system.a;
    c.check(a.data().len() == 30 * 7, "data length is m·n");
    for i in 0..a.rows() {
        let fresh: f64 = a.row(i).iter().map(|v| v * v).sum();
        c.check(
            (a.row_norm_sq(i) - fresh).abs() <= 1e-12 * fresh,
            "cached row norm",
        );
        c.check(a.row_norm_sq(i) > 0.0, "row norm positive");
    }
    let sum: f64 = a.row_norms_sq().iter().sum();
    c.check(
        (a.frob_norm_sq() - sum).abs() <= 1e-12 * sum,
        "Frobenius norm is the row-norm sum",
    );
    c.check(
        DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).is_err(),
        "zero row rejected",
    );

    let p = project_row(&m(&[&[1.0, 0.0]]), &[0.0, 0.0], 0, 2.0, 1.0).unwrap();
    c.check(p.to_vec() == [2.0, 0.0], "project onto x=2");
    let p = project_row(&m(&[&[0.0, 1.0]]), &[2.0, 0.0], 0, 3.0, 1.0).unwrap();
    c.check(p.to_vec() == [2.0, 3.0], "project onto y=3");
    let row = m(&[&[3.0, -1.0]]);
    for alpha in [0.5, 1.0, 2.0] {
        let p = project_row(&row, &[1.0, 1.0], 0, 2.0, alpha).unwrap();
        c.check(p.to_vec() == [1.0, 1.0], "satisfied row leaves x unchanged");
    }
    let p = project_row(&m(&[&[1.0, 0.0]]), &[1.0, 0.0], 0, 0.0, 2.0).unwrap();
    c.check(p.to_vec() == [-1.0, 0.0], "alpha = 2 reflects");

    let id = DenseMatrix::identity(2);
    c.check(
        residual(&id, &[1.0, 2.0], &[1.0, 2.0]).unwrap().to_vec() == [0.0, 0.0],
        "residual at solution",
    );
    c.check(
        residual(&id, &[0.0, 0.0], &[3.0, 4.0]).unwrap().to_vec() == [3.0, 4.0],
        "residual at zero",
    );
    let pm = m(&[&[1.0, 1.0], &[1.0, -1.0]]);
    c.check(
        residual(&pm, &[1.0, 1.0], &[0.0, 0.0]).unwrap().to_vec() == [-2.0, 0.0],
        "hand residual",
    );

    c.close(
        max_consecutive_angle(&m(&[&[1.0, 0.0], &[0.0, 1.0]])).unwrap(),
        FRAC_PI_2,
        1e-15,
        "orthogonal angle",
    );
    c.close(
        max_consecutive_angle(&m(&[&[1.0, 0.0], &[2.0, 0.0]])).unwrap(),
        0.0,
        0.0,
        "parallel angle",
    );
    c.close(
        max_consecutive_angle(&m(&[&[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]])).unwrap(),
        FRAC_PI_4,
        1e-15,
        "hand angle",
    );

    c.check(
        matvec(&DenseMatrix::identity(3), &[1.0, 2.0, 3.0])
            .unwrap()
            .to_vec()
            == [1.0, 2.0, 3.0],
        "identity product",
    );
    let a2 = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
    c.check(
        matvec(&a2, &[1.0, 1.0]).unwrap().to_vec() == [3.0, 7.0],
        "hand product",
    );
    c.check(
        matvec_transpose(&a2, &[1.0, 0.0]).unwrap().to_vec() == [1.0, 2.0],
        "hand transpose product",
    );
}

fn sampling_examples(c: &mut Checks) {
    let mut cy = Cyclic::new(3);
    let seq: Vec<usize> = (0..5).map(|_| cy.next_row()).collect();
    c.check(seq == [0, 1, 2, 0, 1], "cyclic m=3");
    let mut one = Cyclic::new(1);
    c.check((0..5).all(|_| one.next_row() == 0), "cyclic m=1");
    let mut wrap = Cyclic::starting_at(3, u64::MAX);
    let first = wrap.next_row();
    let second = wrap.next_row();
    c.check(
        first < 3 && second == (first + 1) % 3,
        "cyclic counter wraps",
    );

    let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 2.0], [2.0, 0.0]]).unwrap();
    let mut nw = NormWeighted::new(&a);
    for (i, p) in [1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0].into_iter().enumerate() {
        c.close(
            nw.table().probability(i),
            p,
            1e-15,
            "norm-weighted probability",
        );
    }
    let mut rng = Prng::from_seed(1);
    let e = nw.table().entries();
    c.check(
        e[0] >= 0.0 && e.windows(2).all(|w| w[0] <= w[1]) && (e[2] - 1.0).abs() <= 1e-12,
        "cumulative table",
    );
    let mut counts = [0u64; 3];
    (0..100_000).for_each(|_| counts[nw.next_row(&mut rng)] += 1);
    c.frequencies(
        &counts,
        &[1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0],
        "norm-weighted draws",
    );
    let mut eq = NormWeighted::new(&DenseMatrix::identity(5));
    let mut counts = [0u64; 5];
    (0..100_000).for_each(|_| counts[eq.next_row(&mut rng)] += 1);
    c.frequencies(&counts, &[0.2; 5], "equal norms sample uniformly");
    let mut single = NormWeighted::new(&DenseMatrix::identity(1));
    c.check(
        (0..100).all(|_| single.next_row(&mut rng) == 0),
        "norm-weighted m=1",
    );

    let mut counts = [0u64; 6];
    let mut in_range = true;
    for _ in 0..100_000 {
        let i = kaczmarz_core::sampling::uniform_index(&mut rng, 6);
        in_range &= i < 6;
        counts[i.min(5)] += 1;
    }
    c.check(in_range, "uniform range");
    c.frequencies(&counts, &[1.0 / 6.0; 6], "uniform draws");
    c.check(
        kaczmarz_core::sampling::uniform_index(&mut rng, 1) == 0,
        "uniform m=1",
    );

    let mut once = WithoutReplacement::new(3, ShufflePolicy::Once, Prng::from_seed(4));
    let passes: Vec<Vec<usize>> = (0..4)
        .map(|_| (0..3).map(|_| once.next_row()).collect())
        .collect();
    c.check(
        passes.windows(2).all(|w| w[0] == w[1]),
        "shuffle-once repeats its permutation",
    );
    let mut each = WithoutReplacement::new(3, ShufflePolicy::EachPass, Prng::from_seed(4));
    for _ in 0..20 {
        let mut pass: Vec<usize> = (0..3).map(|_| each.next_row()).collect();
        pass.sort_unstable();
        c.check(pass == [0, 1, 2], "shuffle-each-pass pass is a permutation");
    }
    for policy in [ShufflePolicy::Once, ShufflePolicy::EachPass] {
        let mut w = WithoutReplacement::new(1, policy, Prng::from_seed(9));
        c.check(
            (0..10).all(|_| w.next_row() == 0),
            "without replacement m=1",
        );
    }

    let mut h = Halton::new(2).unwrap();
    c.check(
        (0..4).map(|_| h.next_point()).collect::<Vec<_>>() == [0.5, 0.25, 0.75, 0.125],
        "halton base 2",
    );
    let mut h = Halton::new(3).unwrap();
    c.check(
        (0..3).map(|_| h.next_point()).collect::<Vec<_>>() == [1.0 / 3.0, 2.0 / 3.0, 1.0 / 9.0],
        "halton base 3",
    );
    let bins = |pts: &[f64], k: u32| {
        let mut b = vec![0; 1 << k];
        pts.iter()
            .for_each(|&p| b[(p * (1u64 << k) as f64) as usize] += 1);
        b.iter().all(|&n| n == 1)
    };
    for k in 0..=10u32 {
        let mut h = Halton::new(2).unwrap();
        let pts: Vec<f64> = (0..1usize << k).map(|_| h.next_point()).collect();
        c.check(bins(&pts, k), "halton stratification");
        let mut s = Sobol::new();
        let mut pts = vec![0.0];
        pts.extend((1..1usize << k).map(|_| s.next_point()));
        c.check(bins(&pts, k), "sobol stratification (with the origin)");
    }
    let mut s = Sobol::new();
    c.check(
        (0..3).map(|_| s.next_point()).collect::<Vec<_>>() == [0.5, 0.75, 0.25],
        "sobol first points",
    );
    c.check(
        (0..10_000).all(|_| (0.0..1.0).contains(&s.next_point())),
        "sobol range",
    );

    let mut h = Halton::new(2).unwrap();
    c.check(
        (0..3)
            .map(|_| quasirandom_row(h.next_point(), 4))
            .collect::<Vec<_>>()
            == [2, 1, 3],
        "quasirandom rows",
    );
    c.check(quasirandom_row(0.9, 1) == 0, "quasirandom m=1");
    c.check(
        quasirandom_row(1.0 - f64::EPSILON / 2.0, 5) == 4,
        "quasirandom clamp",
    );

    let single = DenseMatrix::from_rows(&[[2.0, 1.0]]).unwrap();
    let mut g = Greedy::new(&single);
    c.check(
        g.select(&single, &[1.0], &[0.0, 0.0], &mut rng) == Some(0),
        "greedy m=1",
    );
    let id = DenseMatrix::identity(2);
    let mut g = Greedy::new(&id);
    let pick = g.select(&id, &[1.0, 0.0], &[0.0, 0.0], &mut rng);
    c.close(g.last_epsilon(), 0.75, 1e-15, "greedy epsilon");
    c.check(pick == Some(0) && g.last_set_size() == 1, "greedy set {0}");
    let sym = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]).unwrap();
    let mut g = Greedy::new(&sym);
    let mut counts = [0u64; 4];
    for _ in 0..100_000 {
        counts[g.select(&sym, &[1.0; 4], &[0.0, 0.0], &mut rng).unwrap()] += 1;
    }
    c.check(g.last_set_size() == 4, "greedy symmetric set is everything");
    c.frequencies(&counts, &[0.25; 4], "greedy symmetric draws");

    let mut set = SelectableSet::new(3);
    set.update_nssrk(1);
    c.check(set.members() == [0, 2], "nssrk rule");
    let id3 = DenseMatrix::identity(3);
    let pattern = OrthogonalityPattern::from_matrix(&id3);
    let mut set = SelectableSet::new(3);
    let mut zero_came_back = false;
    for used in [0, 1, 2, 1, 2] {
        set.update_gssrk(used, &pattern);
        c.check(!set.contains(used), "gssrk removes the used row");
        zero_came_back |= set.contains(0);
    }
    c.check(!zero_came_back, "gssrk identity keeps row 0 out");
    let dense = generate(Family::Ds1, 12, 4, 3);
    let pattern = OrthogonalityPattern::from_matrix(&dense.system.a);
    c.check(pattern.is_fully_dense(), "random rows are never orthogonal");
    let (mut gs, mut ns) = (SelectableSet::new(12), SelectableSet::new(12));
    for used in [3, 7, 3, 0, 11] {
        gs.update_gssrk(used, &pattern);
        ns.update_nssrk(used);
        c.check(
            gs.members() == ns.members(),
            "gssrk equals nssrk on dense rows",
        );
    }

    let cols = DenseMatrix::from_rows(&[[3.0, 0.0], [0.0, 4.0]]).unwrap();
    let mut cw = ColumnWeighted::new(&cols).unwrap();
    c.close(
        cw.table().probability(0),
        9.0 / 25.0,
        1e-15,
        "column probability",
    );
    let mut counts = [0u64; 2];
    (0..100_000).for_each(|_| counts[cw.next_col(&mut rng)] += 1);
    c.frequencies(&counts, &[9.0 / 25.0, 16.0 / 25.0], "column draws");
    let tall = DenseMatrix::from_rows(&[[1.0], [2.0]]).unwrap();
    let mut cw = ColumnWeighted::new(&tall).unwrap();
    c.check((0..50).all(|_| cw.next_col(&mut rng) == 0), "column n=1");
}

fn solver_examples(c: &mut Checks) {
    let scalar = DenseSystem::new(DenseMatrix::from_rows(&[[2.0]]).unwrap(), vec![6.0])
        .unwrap()
        .with_x_star(vec![3.0])
        .unwrap();
    let id3 = DenseSystem::new(DenseMatrix::identity(3), vec![1.0, 2.0, 3.0]).unwrap();
    let run = solvers::solve(&id3, &SolverConfig::new(Method::Ck, 3)).unwrap();
    c.check(
        run.x_final.to_vec() == [1.0, 2.0, 3.0],
        "cyclic identity sweep",
    );
    for kind in [
        "cyclic", "uniform", "norm", "wor:once", "wor:pass", "halton:2", "sobol", "grk", "nssrk",
        "gssrk",
    ] {
        let cfg =
            SolverConfig::new(Method::Rk, 1).with_selector(kind.parse::<SelectorKind>().unwrap());
        c.check(
            solvers::solve(&scalar, &cfg).unwrap().x_final[0] == 3.0,
            "scalar in one projection",
        );
    }
    let two = DenseSystem::new(
        DenseMatrix::from_rows(&[[1.0, 0.0], [1.0, 1.0]]).unwrap(),
        vec![1.0, 2.0],
    )
    .unwrap()
    .with_x_star(vec![1.0, 1.0])
    .unwrap();
    let trace = solvers::solve(&two, &SolverConfig::new(Method::Ck, 4).with_trace(1))
        .unwrap()
        .error_trace;
    let hand = [1.0, 0.5, 0.25, 0.125];
    c.check(
        trace.iter().map(|t| t.1).collect::<Vec<_>>() == hand,
        "cyclic projection trace",
    );

    let inconsistent = DenseSystem::new(
        DenseMatrix::from_rows(&[[1.0], [1.0], [1.0]]).unwrap(),
        vec![0.0, 1.0, 2.0],
    )
    .unwrap()
    .with_x_ls(vec![1.0])
    .unwrap();
    let id4 = DenseSystem::new(DenseMatrix::identity(4), vec![1.0, -2.0, 3.0, 0.5]).unwrap();
    let mut rek = kaczmarz_core::solvers::RekEngine::new(&id4.a, &id4.b, 2).unwrap();
    (0..300).for_each(|_| {
        rek.step().unwrap();
    });
    c.check(
        norm_sq(rek.z()) < 1e-30 && dist_sq(rek.iterate(), &id4.b) < 1e-30,
        "rek identity",
    );
    let mut rek = kaczmarz_core::solvers::RekEngine::new(&scalar.a, &scalar.b, 0).unwrap();
    rek.step().unwrap();
    c.check(rek.iterate() == [3.0] && rek.z() == [0.0], "rek scalar");
    let rek_mean = mean((0..50).map(|s| {
        solvers::run_rek(
            &inconsistent,
            &SolverConfig::new(Method::Rek, 500).with_seed(s),
        )
        .unwrap()
        .x_final[0]
    }));
    c.close(rek_mean, 1.0, 0.05, "rek least squares mean");

    let run = solvers::run_rgs(&id3, &SolverConfig::new(Method::Rgs, 300).with_seed(1)).unwrap();
    c.check(run.x_final.to_vec() == [1.0, 2.0, 3.0], "rgs identity");
    let rnd = generate(Family::Ds1, 50, 10, 4);
    let mut rgs = RgsEngine::new(&rnd.system.a, &rnd.system.b, 3).unwrap();
    for k in 1..=1000 {
        rgs.step().unwrap();
        if k % 100 == 0 {
            let fresh = residual(&rnd.system.a, rgs.iterate(), &rnd.system.b).unwrap();
            let scale = norm_sq(&rnd.system.b).sqrt();
            let worst = fresh
                .iter()
                .zip(rgs.residual())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            c.check(worst <= 1e-10 * scale.max(1.0), "rgs maintained residual");
        }
    }
    let run = solvers::run_rgs(
        &inconsistent,
        &SolverConfig::new(Method::Rgs, 200).with_seed(1),
    )
    .unwrap();
    c.close(run.x_final[0], 1.0, 0.02, "rgs least squares");

    let rk = SolverConfig::new(Method::Rk, 1).with_seed(5);
    let rka = SolverConfig::new(Method::Rka, 1).with_seed(5).with_q(1);
    let (mut l, mut r) = (
        engine(&rnd.system, &rk).unwrap(),
        engine(&rnd.system, &rka).unwrap(),
    );
    let mut same = true;
    for _ in 0..500 {
        l.step().unwrap();
        r.step().unwrap();
        same &= l.iterate() == r.iterate();
    }
    c.check(same, "rka q=1 equals rk");
    let id2 = DenseSystem::new(DenseMatrix::identity(2), vec![2.0, 4.0]).unwrap();
    let outcomes: Vec<Vec<f64>> = (0..40)
        .map(|s| {
            solvers::run_rka(
                &id2,
                &SolverConfig::new(Method::Rka, 1).with_q(2).with_seed(s),
            )
            .unwrap()
            .x_final
            .to_vec()
        })
        .collect();
    c.check(
        outcomes.iter().any(|x| x == &[1.0, 2.0]),
        "rka averaging halves both coordinates",
    );
    c.check(
        outcomes
            .iter()
            .all(|x| x == &[1.0, 2.0] || x == &[2.0, 0.0] || x == &[0.0, 4.0]),
        "rka outcomes",
    );
    c.close(
        rka_optimal_alpha(2, 0.2, 0.8).unwrap(),
        5.0 / 3.0,
        1e-15,
        "rka optimal alpha",
    );

    let run = solvers::run_cimmino(&scalar, &SolverConfig::new(Method::Cimmino, 1)).unwrap();
    c.check(run.x_final[0] == 3.0, "cimmino scalar");
    let id4b: Vec<f64> = id4.b.to_vec();
    let run = solvers::run_cimmino(&id4, &SolverConfig::new(Method::Cimmino, 5)).unwrap();
    let f = 1.0 - 0.75f64.powi(5);
    c.check(
        run.x_final
            .iter()
            .zip(&id4b)
            .all(|(x, b)| (x - b * f).abs() < 1e-14),
        "cimmino identity factor",
    );
    let small = generate(Family::Ds1, 20, 5, 6);
    let trace = solvers::run_cimmino(
        &small.system,
        &SolverConfig::new(Method::Cimmino, 1000).with_trace(1),
    )
    .unwrap()
    .error_trace;
    let floor = 1e-20 * norm_sq(small.reference());
    let mut prev = norm_sq(small.reference());
    let mut decreasing = true;
    for &(_, e) in trace.iter().take_while(|t| t.1 > floor) {
        decreasing &= e < prev;
        prev = e;
    }
    c.check(decreasing, "cimmino error decreases");

    let id3x = id3.clone().with_x_star(vec![1.0, 2.0, 3.0]).unwrap();
    for m in [Method::Cg, Method::Cgls] {
        let run = solvers::solve(&id3x, &SolverConfig::new(m, 1)).unwrap();
        c.check(run.x_final.to_vec() == [1.0, 2.0, 3.0], "krylov identity");
    }
    let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]]).unwrap();
    let b = [1.0, 3.0, -2.0];
    let (g, rhs) = normal_equations(&a, &b);
    let det = g[0] * g[3] - g[1] * g[2];
    let direct = [
        (g[3] * rhs[0] - g[1] * rhs[1]) / det,
        (g[0] * rhs[1] - g[2] * rhs[0]) / det,
    ];
    let sys = DenseSystem::new(a, b.to_vec()).unwrap();
    for m in [Method::Cg, Method::Cgls] {
        let x = solvers::solve(&sys, &SolverConfig::new(m, 2))
            .unwrap()
            .x_final;
        c.check(dist_sq(&x, &direct).sqrt() <= 1e-12, "krylov 2×2");
    }
    let x = solvers::run_cgls(&inconsistent, &SolverConfig::new(Method::Cgls, 1))
        .unwrap()
        .x_final;
    c.close(x[0], 1.0, 1e-12, "cgls least squares");

    c.check(
        check_convergence(&[1.0, 2.0], &[1.0, 2.0], 1e-300).unwrap(),
        "same point converged",
    );
    c.check(
        !check_convergence(&[1e-4, 0.0], &[0.0, 0.0], 1e-8).unwrap(),
        "strict threshold",
    );
    c.check(
        !check_convergence(&[1.0, 0.0], &[0.0, 0.0], 0.5).unwrap(),
        "far point",
    );
}

fn dataset_examples(c: &mut Checks) {
    for family in [Family::Ds1, Family::Ds2] {
        let g = generate(family, 120, 12, 5);
        let b: &[f64] = &g.system.b;
        let ax = matvec(&g.system.a, g.reference()).unwrap();
        let binf = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let worst = ax
            .iter()
            .zip(b)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        c.check(worst <= 1e-9 * binf.max(1.0), "consistent by construction");
        c.check(generate(family, 120, 12, 5) == g, "same seed regenerates");
    }
    let ds1 = generate(Family::Ds1, 500, 50, 1);
    let norms: Vec<f64> = ds1
        .system
        .a
        .row_norms_sq()
        .iter()
        .map(|v| v.sqrt())
        .collect();
    let mu = mean(norms.iter().copied());
    let sd = mean(norms.iter().map(|v| (v - mu) * (v - mu))).sqrt();
    c.check(sd / mu > 0.2, "DS1 row norms spread");

    let ds2 = gen_ds2(&DatasetSpec::new(Family::Ds2, 300, 20, 2)).unwrap();
    let a = &ds2.system.a;
    c.check(
        (1..a.rows()).all(|i| {
            a.row(i)
                .iter()
                .zip(a.row(i - 1))
                .filter(|(p, q)| p != q)
                .count()
                == 5
        }),
        "DS2 consecutive rows differ in five entries",
    );
    c.check(
        DatasetSpec::new(Family::Ds2, 10, 3, 1)
            .validate()
            .unwrap_err()
            .to_string()
            .contains("n < 5"),
        "DS2 needs n ≥ 5",
    );
    let ds2_big = generate(Family::Ds2, 2000, 100, 7);
    let ds1_big = generate(Family::Ds1, 2000, 100, 7);
    c.check(
        max_consecutive_angle(&ds2_big.system.a).unwrap()
            < max_consecutive_angle(&ds1_big.system.a).unwrap(),
        "DS2 is more coherent than DS1",
    );

    let ds3 = generate(Family::Ds3, 150, 15, 9);
    let r = residual(&ds3.system.a, ds3.reference(), &ds3.system.b).unwrap();
    let normal = matvec_transpose(&ds3.system.a, &r).unwrap();
    c.check(
        normal.iter().all(|v| v.abs() <= 1e-8),
        "DS3 normal-equation residual",
    );
    c.check(norm_sq(&r) > 0.0, "DS3 is inconsistent");
    c.check(
        generate(Family::Ds3, 150, 15, 9) == ds3,
        "DS3 noise reproducible",
    );
    let ones = DenseMatrix::from_rows(&[[1.0], [1.0], [1.0]]).unwrap();
    let b = [0.3, 1.9, -0.4];
    c.close(
        least_squares_solution(&ones, &b).unwrap()[0],
        mean(b),
        1e-12,
        "single-column least squares",
    );

    c.check(
        ds1.crop(500, 50).unwrap() == ds1,
        "full crop is the identity",
    );
    let cropped = ds1.crop(200, 20).unwrap();
    let ax = matvec(&cropped.system.a, cropped.reference()).unwrap();
    let worst = ax
        .iter()
        .zip(cropped.system.b.iter())
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    c.check(
        worst <= 1e-9 * cropped.system.b.iter().fold(1.0f64, |m, v| m.max(v.abs())),
        "crop stays consistent",
    );
    c.check(
        ds1.crop(300, 30).unwrap().crop(200, 20).unwrap().system == cropped.system,
        "crops compose",
    );
}

fn bench_examples(c: &mut Checks) {
    let m = 5;
    let b: Vec<f64> = (1..=m).map(|v| v as f64).collect();
    let id = DenseSystem::new(DenseMatrix::identity(m), b.clone()).unwrap();
    let k = calibrate(
        &id,
        &SolverConfig::new(Method::Ck, 1),
        &b,
        EPSILON,
        &[0],
        100,
    )
    .unwrap()
    .k();
    c.check(k == Some(m as u64), "cyclic identity calibrates to m");
    let scalar = DenseSystem::new(DenseMatrix::from_rows(&[[2.0]]).unwrap(), vec![6.0]).unwrap();
    for method in Method::ALL {
        let k = calibrate(
            &scalar,
            &SolverConfig::new(method, 1),
            &[3.0],
            EPSILON,
            &[0, 1],
            10,
        )
        .unwrap()
        .k();
        c.check(
            k == Some(1),
            &format!("{method} calibrates a scalar system to 1"),
        );
    }
    let g = generate(Family::Ds1, 200, 20, 5);
    let t = SolverConfig::new(Method::Rk, 1);
    let first: Vec<u64> = (0..10).collect();
    let second: Vec<u64> = (1000..1010).collect();
    let ka = calibrate(&g.system, &t, g.reference(), EPSILON, &first, CAP)
        .unwrap()
        .k()
        .unwrap();
    let kb = calibrate(&g.system, &t, g.reference(), EPSILON, &second, CAP)
        .unwrap()
        .k()
        .unwrap();
    c.check(
        (0.8..=1.2).contains(&(ka as f64 / kb as f64)),
        "RK calibration stable across seed batches",
    );
    let ds3 = generate(Family::Ds3, 60, 6, 2);
    let cal = calibrate(&ds3.system, &t, ds3.reference(), EPSILON, &[1], 2000).unwrap();
    c.check(
        matches!(cal, Calibration::CapReached { .. }),
        "cap gives a failure record",
    );

    let run = timed_run(&g.system, &t, g.reference(), 200, &bench::run_seeds(1, 6)).unwrap();
    c.check(
        run.times_ns.len() == 6 && run.std_time_ns() >= 0.0,
        "timed run has one time per seed",
    );
    let run = timed_run(
        &g.system,
        &SolverConfig::new(Method::Ck, 1),
        g.reference(),
        200,
        &[1, 2, 3],
    )
    .unwrap();
    c.check(
        run.final_sq_errors.windows(2).all(|w| w[0] == w[1]),
        "cyclic seeds agree",
    );
    let big = generate(Family::Ds1, 2000, 100, 1);
    let formation = (0..3)
        .map(|_| {
            let t0 = Instant::now();
            std::hint::black_box((
                big.system.a.normal_matrix(),
                matvec_transpose(&big.system.a, &big.system.b).unwrap(),
            ));
            t0.elapsed().as_nanos() as u64
        })
        .min()
        .unwrap();
    let cg = timed_run(
        &big.system,
        &SolverConfig::new(Method::Cg, 1),
        big.reference(),
        1,
        &[0, 1, 2],
    )
    .unwrap();
    let fastest = *cg.times_ns.iter().min().unwrap();
    c.check(
        fastest as f64 >= 0.8 * formation as f64,
        "CG time includes the normal equations",
    );

    let empty = CampaignConfig::from_json(r#"{"datasets": [{"family": "DS1", "m": 40, "n": 4, "seed": 1}], "methods": [], "master_seed": 1}"#)
        .unwrap();
    let recs = campaign::run_campaign(&empty.validate().unwrap(), 1).unwrap();
    let mut buf = Vec::new();
    campaign::write_csv(&mut buf, &recs).unwrap();
    c.check(
        String::from_utf8(buf).unwrap().trim_end() == campaign::CSV_HEADER,
        "empty campaign is header only",
    );
    let one = CampaignConfig::from_json(r#"{"datasets": [{"family": "DS1", "m": 40, "n": 4, "seed": 1}], "methods": ["rk"], "seeds": 2, "master_seed": 1}"#)
        .unwrap();
    let recs = campaign::run_campaign(&one.validate().unwrap(), 1).unwrap();
    let mut buf = Vec::new();
    campaign::write_csv(&mut buf, &recs).unwrap();
    c.check(
        campaign::read_csv(buf.as_slice()).unwrap().len() == 1,
        "single cell gives one row",
    );
}

fn cli_examples(c: &mut Checks) {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let ds2 = p("ds2.kzm");
    let gen = [
        "generate", "--family", "ds2", "--m", "2000", "--n", "100", "--seed", "7", "--out", &ds2,
    ];
    let (code, _, _) = run_cli(&gen);
    let side = std::fs::read_to_string(io::sidecar_path(Path::new(&ds2))).unwrap_or_default();
    c.check(
        code == 0 && side.contains("\"family\": \"DS2\""),
        "generate writes the sidecar",
    );
    let first = std::fs::read(&ds2).unwrap_or_default();
    run_cli(&gen);
    c.check(
        std::fs::read(&ds2).unwrap_or_default() == first,
        "generate is byte-reproducible",
    );
    let (code, _, err) = run_cli(&[
        "generate",
        "--family",
        "ds2",
        "--m",
        "20",
        "--n",
        "3",
        "--seed",
        "1",
        "--out",
        &p("x.kzm"),
    ]);
    c.check(
        code == 2 && err.contains("n < 5"),
        "narrow DS2 is a usage error",
    );

    let id_path = p("id.kzm");
    let id = DenseSystem::new(DenseMatrix::identity(4), vec![4.0, 3.0, 2.0, 1.0])
        .unwrap()
        .with_x_star(vec![4.0, 3.0, 2.0, 1.0])
        .unwrap();
    io::save_dataset(
        Path::new(&id_path),
        &id,
        &Sidecar::custom("identity", &id, 0, Path::new(&id_path)),
    )
    .unwrap();
    let (code, out, _) = run_cli(&["solve", "--in", &id_path, "--method", "ck", "--iters", "4"]);
    c.check(
        code == 0 && cli_value(&out, "final_sq_error:") == "0e0",
        "cyclic identity prints zero error",
    );

    let d = p("d.kzm");
    run_cli(&[
        "generate", "--family", "ds1", "--m", "200", "--n", "20", "--seed", "2", "--out", &d,
    ]);
    let (_, rk, _) = run_cli(&[
        "solve", "--in", &d, "--method", "rk", "--iters", "500", "--seed", "5",
    ]);
    let (_, rka, _) = run_cli(&[
        "solve", "--in", &d, "--method", "rka", "--q", "1", "--iters", "500", "--seed", "5",
    ]);
    c.check(
        cli_value(&rk, "final_sq_error:") == cli_value(&rka, "final_sq_error:"),
        "rka q=1 prints the rk result",
    );

    let zero_path = p("zero.kzm");
    let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, -1.0], [1.0, 1.0]]).unwrap();
    let zero = DenseSystem::new(a, vec![0.0; 3])
        .unwrap()
        .with_x_star(vec![0.0; 2])
        .unwrap();
    io::save_dataset(
        Path::new(&zero_path),
        &zero,
        &Sidecar::custom("zero", &zero, 0, Path::new(&zero_path)),
    )
    .unwrap();
    let (code, out, _) = run_cli(&[
        "solve", "--in", &zero_path, "--method", "grk", "--iters", "50",
    ]);
    c.check(
        code == 0 && cli_value(&out, "iterations:") == "0",
        "greedy on a solved system needs 0 iterations",
    );
    let (code, _, _) = run_cli(&["solve", "--in", &d, "--method", "bogus", "--iters", "5"]);
    c.check(code == 2, "unknown method is a usage error");
    let (code, _, _) = run_cli(&[
        "solve",
        "--in",
        &p("missing.kzm"),
        "--method",
        "rk",
        "--iters",
        "5",
    ]);
    c.check(code == 1, "missing file is a runtime error");

    let cfg = p("empty.json");
    std::fs::write(&cfg, r#"{"datasets": [], "methods": [], "master_seed": 1}"#).unwrap();
    let (code, _, _) = run_cli(&["bench", "--config", &cfg, "--out", &p("empty.csv")]);
    let text = std::fs::read_to_string(p("empty.csv")).unwrap_or_default();
    c.check(
        code == 0 && text.trim_end() == campaign::CSV_HEADER,
        "bench with no methods",
    );
    let bad = p("bad.json");
    std::fs::write(&bad, "{\"methods\": [}").unwrap();
    let (code, _, err) = run_cli(&["bench", "--config", &bad, "--out", &p("bad.csv")]);
    c.check(
        code == 2 && err.contains("line 1 column"),
        "malformed config reports its location",
    );
}

fn criterion_1() -> String {
    let mut c = Checks::default();
    linalg_examples(&mut c);
    sampling_examples(&mut c);
    solver_examples(&mut c);
    dataset_examples(&mut c);
    bench_examples(&mut c);
    cli_examples(&mut c);
    assert!(
        c.failed.is_empty(),
        "{} of {} examples failed: {:?}",
        c.failed.len(),
        c.total,
        c.failed
    );
    format!("{} examples", c.total)
}

fn criterion_2() -> String {
    let consistent = [
        Method::Ck,
        Method::Rk,
        Method::Srk,
        Method::Srkwor,
        Method::SrkHalton,
        Method::SrkSobol,
        Method::Grk,
        Method::Nssrk,
        Method::Gssrk,
        Method::Rka,
        Method::Cimmino,
        Method::Cg,
        Method::Cgls,
    ];
    let systems = [
        generate(Family::Ds1, 500, 20, 11),
        generate(Family::Ds2, 1000, 50, 12),
    ];
    let mut worst = 0u64;
    for g in &systems {
        for method in consistent {
            let cfg = SolverConfig::new(method, 1).with_seed(MASTER);
            let k = solvers::iterations_to_tolerance(&g.system, &cfg, g.reference(), EPSILON, CAP)
                .unwrap();
            let k = k.unwrap_or_else(|| {
                panic!(
                    "{method} on {} {}×{} hit the cap",
                    g.spec.family,
                    g.rows(),
                    g.cols()
                )
            });
            let run = solvers::solve(
                &g.system,
                &SolverConfig {
                    max_iterations: k,
                    ..cfg
                },
            )
            .unwrap();
            assert!(dist_sq(&run.x_final, g.reference()) < EPSILON);
            worst = worst.max(k);
        }
    }
    format!("13 methods × 2 systems converged, largest k = {worst}")
}

fn criterion_3() -> String {
    let g = generate(Family::Ds1, 50, 10, 21);
    let a = &g.system.a;
    let (gram, _) = normal_equations(a, &g.system.b);
    let sigma_min_sq = jacobi_eigenvalues(gram, 10)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let rate = 1.0 - sigma_min_sq / a.frob_norm_sq();
    let x0_err = norm_sq(g.reference());
    let ks = [10u64, 50, 100];
    let mut sums = [0.0; 3];
    for seed in 0..200 {
        let run = solvers::solve(
            &g.system,
            &SolverConfig::new(Method::Rk, 100)
                .with_seed(seed)
                .with_trace(10),
        )
        .unwrap();
        for (s, &k) in sums.iter_mut().zip(&ks) {
            *s += run.error_trace.iter().find(|t| t.0 == k).unwrap().1;
        }
    }
    let mut parts = Vec::new();
    for (s, &k) in sums.iter().zip(&ks) {
        let observed = s / 200.0;
        let bound = rate.powi(k as i32) * x0_err;
        assert!(
            observed <= 1.1 * bound,
            "k={k}: mean {observed:e} > 1.1 × bound {bound:e}"
        );
        parts.push(format!("k={k}: {:.3} of bound", observed / bound));
    }
    parts.join(", ")
}

fn criterion_4() -> String {
    let g = generate(Family::Ds2, 2000, 100, 31);
    let ck = calibrated_k(&g, Method::Ck, 10);
    let rk = calibrated_k(&g, Method::Rk, 10);
    assert!(ck as f64 >= 1.5 * rk as f64, "ck {ck} < 1.5 × rk {rk}");
    format!("ck k={ck}, rk k={rk}, ratio {:.2}", ck as f64 / rk as f64)
}

fn criterion_5() -> String {
    let g = generate(Family::Ds1, 2000, 100, 41);
    let rk = calibrated_k(&g, Method::Rk, 10);
    let wor = calibrated_k(&g, Method::Srkwor, 10);
    let halton = calibrated_k(&g, Method::SrkHalton, 10);
    assert!(wor as f64 <= 1.05 * rk as f64, "srkwor {wor} vs rk {rk}");
    assert!(
        halton as f64 <= 1.05 * rk as f64,
        "srk-halton {halton} vs rk {rk}"
    );
    format!("rk k={rk}, srkwor k={wor}, srk-halton k={halton}")
}

fn criterion_6() -> String {
    let g = generate(Family::Ds1, 1000, 50, 51);
    let rk = calibrated_k(&g, Method::Rk, 10);
    let grk = calibrated_k(&g, Method::Grk, 10);
    assert!(grk < rk, "grk {grk} ≥ rk {rk}");
    format!("grk k={grk}, rk k={rk}")
}

fn criterion_7() -> String {
    let g = generate(Family::Ds3, 200, 20, 61);
    let (gram, rhs) = normal_equations(&g.system.a, &g.system.b);
    let oracle = cholesky_solve(&gram, &rhs);
    let ls_gap = dist_sq(g.reference(), &oracle) / norm_sq(&oracle);
    assert!(
        ls_gap < 1e-20,
        "x_LS disagrees with the normal equations: relative {ls_gap:e}"
    );

    let target = 1e-6;
    let mut budget = 0;
    for method in [Method::Rek, Method::Rgs] {
        for seed in bench::run_seeds(MASTER, 20) {
            let cfg = SolverConfig::new(method, 1).with_seed(seed);
            let k = solvers::iterations_to_tolerance(&g.system, &cfg, g.reference(), target, CAP)
                .unwrap();
            budget =
                budget.max(k.unwrap_or_else(|| panic!("{method} seed {seed} did not reach 1e-6")));
        }
    }
    let budget = 10 * budget;
    let plateau = mean(bench::run_seeds(MASTER, 20).into_iter().map(|seed| {
        let run = solvers::solve(
            &g.system,
            &SolverConfig::new(Method::Rk, budget).with_seed(seed),
        )
        .unwrap();
        dist_sq(&run.x_final, g.reference())
    }));
    assert!(
        plateau >= 10.0 * target,
        "rk plateau {plateau:e} below 10 × {target:e}"
    );
    format!("rek/rgs < 1e-6 within {} its; rk plateau {plateau:.3e} after {budget}; x_LS gap {ls_gap:.1e}", budget / 10)
}

fn criterion_8() -> String {
    let g = generate(Family::Ds3, 200, 20, 71);
    let k = 5_000;
    let err = |q: usize| {
        mean(bench::run_seeds(MASTER, 50).into_iter().map(|seed| {
            let cfg = SolverConfig::new(Method::Rka, k)
                .with_q(q)
                .with_alpha(1.0)
                .with_seed(seed);
            dist_sq(
                &solvers::run_rka(&g.system, &cfg).unwrap().x_final,
                g.reference(),
            )
        }))
    };
    let (one, eight) = (err(1), err(8));
    assert!(
        eight < one,
        "q=8 error {eight:e} not below q=1 error {one:e}"
    );
    format!("k={k}: q=1 {one:.3e}, q=8 {eight:.3e}")
}

fn criterion_9() -> String {
    let spec = DatasetSpec::new(Family::Ds1, 1000, 50, 81).with_fixed_sigma(10.0);
    let g = GeneratedSystem::generate(&spec).unwrap();
    let rk = calibrated_k(&g, Method::Rk, 10);
    let srk = calibrated_k(&g, Method::Srk, 10);
    let gap = (rk as f64 - srk as f64).abs() / rk as f64;
    assert!(gap < 0.10, "rk {rk} vs srk {srk}: {:.1}%", 100.0 * gap);
    format!("rk k={rk}, srk k={srk}, gap {:.1}%", 100.0 * gap)
}

fn criterion_10() -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/desk.json");
    let config = CampaignConfig::from_reader(std::fs::File::open(path).unwrap())
        .unwrap()
        .validate()
        .unwrap();
    let summarize = |threads: usize| -> Vec<(Option<u64>, Option<u64>)> {
        let records = campaign::run_campaign(&config, threads).unwrap();
        let mut buf = Vec::new();
        campaign::write_csv(&mut buf, &records).unwrap();
        campaign::read_csv(buf.as_slice())
            .unwrap()
            .iter()
            .map(|r| (r.calibrated_k, r.mean_final_sq_error.map(f64::to_bits)))
            .collect()
    };
    let first = summarize(campaign::worker_count());
    let second = summarize(campaign::worker_count());
    assert_eq!(first, second, "campaign re-run differs");
    let measured = first.iter().filter(|r| r.0.is_some()).count();
    format!("{} cells identical ({measured} calibrated)", first.len())
}

fn criterion_11() -> String {
    let mut h = Halton::new(2).unwrap();
    let mut s = Sobol::new();
    for i in 1..=16u64 {
        let hp = h.next_point();
        let sp = s.next_point();
        assert_eq!(
            hp.to_bits(),
            van_der_corput(i).to_bits(),
            "halton point {i}"
        );
        assert_eq!(hp, radical_inverse(i, 2), "halton point {i}");
        assert_eq!(sp.to_bits(), sobol_gray(i).to_bits(), "sobol point {i}");
    }
    "16 halton and 16 sobol points exact".into()
}

fn main() {
    let criteria: [(&str, Duration, fn() -> String); 11] = [
        (
            "kernel and example suite",
            Duration::from_secs(10),
            criterion_1,
        ),
        (
            "convergence to 1e-8 on DS1 and DS2",
            Duration::from_secs(60),
            criterion_2,
        ),
        (
            "RK mean error within the expected bound",
            Duration::from_secs(30),
            criterion_3,
        ),
        (
            "CK slower than RK on coherent rows",
            Duration::from_secs(60),
            criterion_4,
        ),
        (
            "without-replacement and Halton not slower than RK",
            Duration::from_secs(60),
            criterion_5,
        ),
        (
            "GRK needs fewer iterations than RK",
            Duration::from_secs(60),
            criterion_6,
        ),
        (
            "REK and RGS pass the RK horizon",
            Duration::from_secs(60),
            criterion_7,
        ),
        (
            "RKA averaging lowers the horizon",
            Duration::from_secs(60),
            criterion_8,
        ),
        (
            "RK and SRK agree on equal-norm rows",
            Duration::from_secs(30),
            criterion_9,
        ),
        (
            "campaign re-run is reproducible",
            Duration::from_secs(300),
            criterion_10,
        ),
        (
            "quasirandom points match their oracles",
            Duration::from_secs(1),
            criterion_11,
        ),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f.parse() == Ok(id)) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(detail) if elapsed <= budget => (true, detail),
            Ok(detail) => (false, format!("{detail}; over the {budget:?} budget")),
            Err(e) => (
                false,
                e.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default(),
            ),
        };
        failures += usize::from(!pass);
        println!(
            "criterion {id:>2} {}: {name} ({:.2}s) {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
