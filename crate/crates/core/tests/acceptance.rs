//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use blochcert_core::floquet::build_b;
use blochcert_core::laurent::LaurentPoly;
use blochcert_core::model::working_order;
use blochcert_core::oracle::{
    band_path, match_points, monodromy_run, polynomial_roots, MonodromyVerdict, NumericFloquet,
};
use blochcert_core::{
    certify, check_a2, CycloNumber, FloquetSystem, GaussianRational, OperatorModel, Preset, Verdict,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_s), || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn all_q(d: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=max).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::new(
        rat(rng.random_range(-9..10), rng.random_range(1..5)),
        rat(rng.random_range(-9..10), rng.random_range(1..5)),
    )
}

fn random_torus(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    (0..d)
        .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..TAU)))
        .collect()
}

/// Random model with `Q <= 6`, up to six hoppings in `[-2, 2]^d`, complex
/// rational potential.
fn random_small_model(rng: &mut ChaCha8Rng) -> OperatorModel {
    const PERIODS: [&[u32]; 10] = [
        &[1],
        &[2],
        &[3],
        &[5],
        &[6],
        &[1, 2],
        &[2, 2],
        &[2, 3],
        &[3, 1],
        &[3, 2],
    ];
    let q = PERIODS[rng.random_range(0..PERIODS.len())].to_vec();
    let d = q.len();
    let mut hop = BTreeMap::new();
    let count = rng.random_range(1..=6).min(5usize.pow(d as u32));
    while hop.len() < count {
        let offset: Vec<i64> = (0..d).map(|_| rng.random_range(-2..=2)).collect();
        let a = random_gaussian(rng);
        if !a.is_zero() {
            hop.insert(offset, a);
        }
    }
    let cells = q.iter().map(|&x| x as usize).product();
    let potential = (0..cells).map(|_| random_gaussian(rng)).collect();
    OperatorModel::new(q, hop, potential).expect("valid random model")
}

fn random_cyclo_poly(
    rng: &mut ChaCha8Rng,
    d: usize,
    order: i64,
    terms: usize,
    span: i64,
) -> LaurentPoly<CycloNumber> {
    let mut list = Vec::new();
    for _ in 0..terms {
        let e: Vec<i64> = (0..d).map(|_| rng.random_range(-span..=span)).collect();
        let c = CycloNumber::gaussian(
            order,
            rat(rng.random_range(-5..6), rng.random_range(1..4)),
            rat(rng.random_range(-5..6), rng.random_range(1..4)),
        )
        .unwrap();
        let c = if rng.random_bool(0.3) {
            c.checked_mul(&CycloNumber::root(rng.random_range(0..order), order).unwrap())
                .unwrap()
        } else {
            c
        };
        list.push((e, c));
    }
    LaurentPoly::from_terms(d, false, list).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    let expect_certified = |preset: Preset, q: Vec<u32>| -> Result<(), String> {
        let m = OperatorModel::preset_free(preset, q.clone()).map_err(|e| e.to_string())?;
        let c = certify(&m).map_err(|e| e.to_string())?;
        ensure(c.verdict == Verdict::CertifiedIrreducible, || {
            format!("{} q={q:?}: {}", preset.name(), c.verdict.as_str())
        })
    };
    for d in 1..=3 {
        for q in all_q(d, 3) {
            expect_certified(Preset::Square(d), q)?;
            count += 1;
        }
    }
    for q in all_q(2, 4) {
        expect_certified(Preset::Triangular, q)?;
        count += 1;
    }
    for q in [vec![2, 3], vec![3, 4], vec![2, 5]] {
        expect_certified(Preset::ExtendedHarper, q)?;
        count += 1;
    }
    let ehm = certify(&OperatorModel::preset_free(Preset::ExtendedHarper, vec![2, 2]).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(ehm.verdict == Verdict::AssumptionA2Fails, || {
        format!("ehm q=(2,2): {}", ehm.verdict.as_str())
    })?;
    let witness = ehm.a2.witness.ok_or("ehm q=(2,2): no witness")?;
    ensure(witness.n == vec![0, 0] && witness.n_prime == vec![1, 1], || {
        format!("ehm q=(2,2): witness {witness:?}")
    })?;
    within(start.elapsed(), 5)?;
    Ok(format!(
        "{} certified models, ehm (2,2) fails (A2) with witness (1,1)",
        count
    ))
}

fn criterion_2() -> Outcome {
    let names = |d| blochcert_core::laurent::variable_names(d, "z", false);
    let h_of = |preset: Preset, d: usize| {
        OperatorModel::preset_free(preset, vec![1; d])
            .unwrap()
            .symbol()
            .unwrap()
            .lowest_component()
            .unwrap()
    };
    for d in 1..=3 {
        let h = h_of(Preset::Square(d), d);
        let want = LaurentPoly::from_terms(
            d,
            false,
            (0..d).map(|j| {
                let mut e = vec![0; d];
                e[j] = -1;
                (e, CycloNumber::from_integer(4, -1).unwrap())
            }),
        )
        .unwrap();
        ensure(h == want, || {
            format!("square d={d}: h = {}", h.to_compact(&names(d)))
        })?;
    }
    let tri = h_of(Preset::Triangular, 2);
    let want = LaurentPoly::from_terms(
        2,
        false,
        [
            (vec![-1, 0], CycloNumber::from_integer(4, -1).unwrap()),
            (vec![0, -1], CycloNumber::from_integer(4, -1).unwrap()),
        ],
    )
    .unwrap();
    ensure(tri == want, || {
        format!("triangular: h = {}", tri.to_compact(&names(2)))
    })?;
    let ehm = h_of(Preset::ExtendedHarper, 2);
    let want = LaurentPoly::from_terms(
        2,
        false,
        [(vec![-1, -1], CycloNumber::from_integer(4, -1).unwrap())],
    )
    .unwrap();
    ensure(ehm == want, || format!("ehm: h = {}", ehm.to_compact(&names(2))))?;
    Ok(format!(
        "square h = {}, triangular h = {}, ehm h = {}",
        h_of(Preset::Square(2), 2).to_compact(&names(2)),
        tri.to_compact(&names(2)),
        ehm.to_compact(&names(2))
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for index in 0..20 {
        let m = random_small_model(&mut rng);
        let q = m.q().to_vec();
        let big_q = m.cells() as i64;
        let mut sys = FloquetSystem::new(&m).map_err(|e| e.to_string())?;
        let ptilde = sys
            .char_poly()
            .map_err(|e| format!("model {index}: {e}"))?
            .clone();
        let lead = ptilde.lambda_coefficient(big_q);
        let sign = if big_q % 2 == 0 { 1 } else { -1 };
        let want = LaurentPoly::constant(
            q.len(),
            false,
            CycloNumber::from_integer(sys.order(), sign).unwrap(),
        );
        ensure(ptilde.lambda_degree() == Some(big_q) && lead == want, || {
            format!("model {index} q={q:?}: leading lambda coefficient {lead}")
        })?;
        let mut q_lam = q.clone();
        q_lam.push(1);
        ensure(ptilde.support_in_lattice(&q_lam), || {
            format!("model {index}: support outside the period lattice")
        })?;
        let lifted = sys.lift_char().map_err(|e| e.to_string())?.clone();
        let (pt, pl) = (ptilde.to_complex_poly(), lifted.to_complex_poly());
        for _ in 0..100 {
            let mut z = random_torus(&mut rng, q.len());
            let lam = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let mut w: Vec<Complex64> = z.iter().zip(&q).map(|(zj, &qj)| zj.powi(qj as i32)).collect();
            z.push(lam);
            w.push(lam);
            let a = pt.eval(&z).map_err(|e| e.to_string())?;
            let b = pl.eval(&w).map_err(|e| e.to_string())?;
            let rel = (a - b).norm() / a.norm().max(1.0);
            worst = worst.max(rel);
        }
    }
    ensure(worst <= 1e-9, || {
        format!("lift round trip relative error {worst:e}")
    })?;
    within(start.elapsed(), 60)?;
    Ok(format!(
        "20 models, lead (-1)^Q, support in lattice, round trip max rel err {worst:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..500 {
        let d = rng.random_range(1..=3);
        let (nf, ng) = (rng.random_range(1..6), rng.random_range(1..6));
        let f = random_cyclo_poly(&mut rng, d, 12, nf, 3);
        let g = random_cyclo_poly(&mut rng, d, 12, ng, 3);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let fg = f.mul(&g).map_err(|e| e.to_string())?;
        let lhs = fg.lowest_component().map_err(|e| e.to_string())?;
        let rhs = f
            .lowest_component()
            .unwrap()
            .mul(&g.lowest_component().unwrap())
            .map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || {
            format!("pair {i}: lowest(fg) != lowest(f) lowest(g)")
        })?;
    }
    Ok("500 random pairs, exact equality".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut passes, mut fails) = (0, 0);
    for i in 0..200 {
        let d = rng.random_range(1..=3);
        let q: Vec<u32> = (0..d).map(|_| rng.random_range(1..=4)).collect();
        let order = working_order(&q);
        let terms = rng.random_range(1..5);
        let p = random_cyclo_poly(&mut rng, d, order, terms, 2);
        if p.is_zero() {
            continue;
        }
        let (pass, witness) = check_a2(&p, &q).map_err(|e| e.to_string())?;
        let h = p.lowest_component().unwrap();
        let cell = blochcert_core::model::fundamental_cell(&q);
        let twists: Vec<_> = cell.iter().map(|n| h.twist(n, &q).unwrap()).collect();
        let mut first = None;
        'outer: for a in 0..twists.len() {
            for b in (a + 1)..twists.len() {
                if twists[a] == twists[b] {
                    first = Some(b);
                    break 'outer;
                }
            }
        }
        let brute_pass = first.is_none();
        ensure(pass == brute_pass, || {
            format!("instance {i} q={q:?}: congruence {pass}, direct {brute_pass}")
        })?;
        if let Some(w) = witness {
            ensure(twists[0] == h.twist(&w.n_prime, &q).unwrap(), || {
                format!("instance {i}: witness is not a coincidence")
            })?;
        }
        if pass {
            passes += 1
        } else {
            fails += 1
        }
    }
    Ok(format!("200 instances agree ({passes} pass, {fails} fail)"))
}

fn criterion_6() -> Outcome {
    let free = OperatorModel::preset_free(Preset::Square(1), vec![2]).unwrap();
    let start = Instant::now();
    let r = monodromy_run(&free, 32, 1).map_err(|e| e.to_string())?;
    ensure(r.verdict == MonodromyVerdict::Transitive, || {
        format!("free chain: {}", r.verdict.as_str())
    })?;
    within(start.elapsed(), 30)?;

    for seed in 1..=5u64 {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let potential = (0..4).map(|_| random_gaussian(&mut rng)).collect();
        let m = OperatorModel::from_preset(Preset::Square(2), vec![2, 2], potential).unwrap();
        let r = monodromy_run(&m, 32, seed).map_err(|e| e.to_string())?;
        ensure(r.verdict == MonodromyVerdict::Transitive, || {
            format!(
                "square (2,2) seed {seed}: {} orbits {:?}",
                r.verdict.as_str(),
                r.orbits
            )
        })?;
        within(start.elapsed(), 30)?;
    }

    let start = Instant::now();
    let mut hop = BTreeMap::new();
    hop.insert(vec![2], GaussianRational::from_integers(-1, 0));
    hop.insert(vec![-2], GaussianRational::from_integers(-1, 0));
    let decoupled = OperatorModel::new(
        vec![2],
        hop,
        vec![
            GaussianRational::from_integers(1, 0),
            GaussianRational::from_integers(-1, 0),
        ],
    )
    .unwrap();
    let r = monodromy_run(&decoupled, 32, 1).map_err(|e| e.to_string())?;
    ensure(
        r.verdict == MonodromyVerdict::IntransitiveStable && r.orbits == vec![vec![1], vec![2]],
        || format!("decoupled: {} orbits {:?}", r.verdict.as_str(), r.orbits),
    )?;
    within(start.elapsed(), 30)?;
    Ok("free q=2 and square (2,2) seeds 1-5 transitive; decoupled chain {{1},{2}} stable".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut models: Vec<OperatorModel> = (0..4).map(|_| random_small_model(&mut rng)).collect();
    for (preset, q) in [
        (Preset::Square(2), vec![2u32, 2]),
        (Preset::Triangular, vec![2, 3]),
        (Preset::ExtendedHarper, vec![3, 2]),
    ] {
        let cells = q.iter().map(|&x| x as usize).product();
        let potential = (0..cells).map(|_| random_gaussian(&mut rng)).collect();
        models.push(OperatorModel::from_preset(preset, q, potential).unwrap());
    }
    let mut worst: f64 = 0.0;
    for (index, m) in models.iter().enumerate() {
        let mut sys = FloquetSystem::new(m).map_err(|e| e.to_string())?;
        let ptilde = sys.char_poly().map_err(|e| e.to_string())?.clone();
        let coeffs: Vec<LaurentPoly<Complex64>> = (0..=m.cells() as i64)
            .map(|k| ptilde.lambda_coefficient(k).to_complex_poly())
            .collect();
        let nf = NumericFloquet::new(m).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let z = random_torus(&mut rng, m.d());
            let c: Vec<Complex64> = coeffs.iter().map(|p| p.eval(&z).unwrap()).collect();
            let roots = polynomial_roots(&c).map_err(|e| e.to_string())?;
            let eig = nf.spectrum_at(&z).map_err(|e| e.to_string())?;
            let (_, err) = match_points(&roots, &eig);
            ensure(err <= 1e-8, || {
                format!("model {index} q={:?}: mismatch {err:e}", m.q())
            })?;
            worst = worst.max(err);
        }
    }
    Ok(format!(
        "{} models x 50 torus points, max deviation {worst:.1e}",
        models.len()
    ))
}

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    for (preset, q) in [
        (Preset::Square(1), vec![3u32]),
        (Preset::Square(2), vec![2, 2]),
        (Preset::Triangular, vec![2, 3]),
        (Preset::ExtendedHarper, vec![3, 2]),
    ] {
        for c in [
            GaussianRational::from_integers(3, 0),
            GaussianRational::new(rat(-5, 2), rat(1, 3)),
        ] {
            let free = OperatorModel::preset_free(preset, q.clone()).unwrap();
            let cells = free.cells();
            let shifted = free.with_potential(vec![c.clone(); cells]).unwrap();
            let b = build_b(&shifted).map_err(|e| e.to_string())?;
            let cc = c.to_cyclo(shifted.working_order()).unwrap();
            let zero = CycloNumber::zero(shifted.working_order()).unwrap();
            for (i, row) in b.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { &cc } else { &zero };
                    ensure(v == want, || {
                        format!("{} q={q:?}: B[{i}][{j}] = {v}", preset.name())
                    })?;
                }
            }
            let d = q.len();
            let path = vec![vec![0.0; d], vec![0.5; d], {
                let mut k = vec![0.0; d];
                k[0] = 0.37;
                k
            }];
            let a = band_path(&free, &path, 64).map_err(|e| e.to_string())?;
            let s = band_path(&shifted, &path, 64).map_err(|e| e.to_string())?;
            let shift = c.to_complex();
            for (ra, rs) in a.rows.iter().zip(&s.rows) {
                let mut base: Vec<Complex64> = ra.eigenvalues.iter().map(|v| v + shift).collect();
                blochcert_core::oracle::sort_spectrum(&mut base);
                for (x, y) in base.iter().zip(&rs.eigenvalues) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
    }
    ensure(worst <= 1e-12, || format!("band shift deviation {worst:e}"))?;
    Ok(format!("B = cI exactly; band shift max deviation {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let free = OperatorModel::preset_free(Preset::Square(1), vec![1]).unwrap();
    let table = band_path(&free, &[vec![0.0], vec![1.0]], 128).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for row in &table.rows {
        let want = -2.0 * (TAU * row.k[0]).cos();
        worst = worst.max((row.eigenvalues[0] - Complex64::new(want, 0.0)).norm());
    }
    ensure(worst <= 1e-12, || format!("1d band deviation {worst:e}"))?;
    let square = OperatorModel::preset_free(Preset::Square(2), vec![1, 1]).unwrap();
    let corner = band_path(&square, &[vec![0.5, 0.5], vec![0.5, 0.5]], 2).map_err(|e| e.to_string())?;
    let v = corner.rows[0].eigenvalues[0];
    ensure((v - Complex64::new(4.0, 0.0)).norm() <= 1e-12, || {
        format!("square corner value {v}")
    })?;
    Ok(format!(
        "128 samples max deviation {worst:.1e}; square corner {}",
        v.re
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("corollary regression", criterion_1),
        ("lowest components", criterion_2),
        ("structural identities", criterion_3),
        ("lowest-degree multiplicativity", criterion_4),
        ("A2 congruence vs direct twists", criterion_5),
        ("monodromy oracle agreement", criterion_6),
        ("spectral consistency", criterion_7),
        ("constant potential", criterion_8),
        ("band closed forms", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {}: {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {label} ({secs:.2}s) - {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {label} ({secs:.2}s) - {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
