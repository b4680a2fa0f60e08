//! Acceptance checks, one line per criterion. Runs without the test harness
//! so the summary is always printed; exits nonzero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{
    balanced, balanced_weights, classical_of, eval, oracle_b, oracle_l, random_element, random_exponent,
    random_point, random_torus, random_vpoly,
};
use num_rational::BigRational;
use qcluster::mutation::check_compatible;
use qcluster::mutation::random::random_compatible_pair;
use qcluster::{
    audit_graph, collect_variables, detect_period, fixtures, mutation_graph, ExploreOptions, ExponentVector,
    IntMatrix, MutationGraph, QuantumSeed, QuantumTorus, VPoly,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Quasi-commutation checks made by every criterion on every mutated seed.
#[derive(Default)]
struct QcLog {
    seeds: usize,
    pairs: usize,
    failures: Vec<String>,
}

thread_local! {
    static QC: RefCell<QcLog> = RefCell::new(QcLog::default());
}

fn observe(seed: &QuantumSeed) {
    let vars = seed.vars();
    let mut pairs = 0;
    let mut failures = Vec::new();
    for i in 0..vars.len() {
        for j in 0..vars.len() {
            pairs += 1;
            let found = vars[i].qcommute(&vars[j]).unwrap();
            if found != Some(seed.l()[(i, j)]) {
                failures.push(format!(
                    "history {:?}: ({i}, {j}) expected {}, found {found:?}",
                    seed.history(),
                    seed.l()[(i, j)]
                ));
            }
        }
    }
    QC.with(|log| {
        let mut log = log.borrow_mut();
        log.seeds += 1;
        log.pairs += pairs;
        log.failures.extend(failures);
    });
}

fn observe_graph(graph: &MutationGraph) {
    graph.nodes.iter().for_each(|n| observe(&n.seed));
}

fn mutate(seed: &QuantumSeed, k: usize) -> QuantumSeed {
    let next = seed.mutate(k).unwrap();
    observe(&next);
    next
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn a2_fixture() -> Outcome {
    let start = Instant::now();
    let pair = fixtures::a2_pair();
    let d = check_compatible(pair.indices(), pair.l(), pair.b()).map_err(|e| e.to_string())?;
    ensure(d == 2, || format!("d = {d}, expected 2"))?;
    let seed = QuantumSeed::initial(pair);

    let graph = mutation_graph(&seed, &ExploreOptions::depth(12)).map_err(|e| e.to_string())?;
    observe_graph(&graph);
    let vars = collect_variables(&graph);
    ensure(vars.len() == 5, || format!("{} distinct variables, expected 5", vars.len()))?;

    let labeled = detect_period(&seed, &[1, 2], 20, false).map_err(|e| e.to_string())?;
    let folded = detect_period(&seed, &[1, 2], 20, true).map_err(|e| e.to_string())?;
    ensure(labeled == Some(10), || format!("labeled period {labeled:?}, expected 10"))?;
    ensure(folded == Some(5), || format!("folded period {folded:?}, expected 5"))?;

    // commutative oracle at v = 1
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let point = random_point(&mut rng, 2);
    let mut c = classical_of(&seed, point.clone());
    let mut q = seed.clone();
    let mut values: BTreeSet<BigRational> = c.x.iter().cloned().collect();
    let mut classical_period = None;
    let mut classical_swap = None;
    for step in 1..=10usize {
        let k = 2 - step % 2;
        q = mutate(&q, k);
        c = c.mutate(k - 1);
        for (x, value) in q.vars().iter().zip(&c.x) {
            ensure(&eval(x, &point) == value, || format!("v=1 oracle disagrees at step {step}"))?;
        }
        values.extend(c.x.iter().cloned());
        if classical_period.is_none() && c.x == point {
            classical_period = Some(step);
        }
        if classical_swap.is_none() && c.x == [point[1].clone(), point[0].clone()] {
            classical_swap = Some(step);
        }
    }
    ensure(values.len() == 5, || format!("oracle sees {} values", values.len()))?;
    ensure(classical_period == Some(10) && classical_swap == Some(5), || {
        format!("oracle period {classical_period:?}, swap {classical_swap:?}")
    })?;

    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "d=2, 5 variables, period 10 labeled / 5 folded, v=1 oracle agrees ({elapsed:.2?})"
    ))
}

fn kronecker_fixture() -> Outcome {
    let start = Instant::now();
    let seed = QuantumSeed::initial(fixtures::kronecker_pair());
    let graph = mutation_graph(&seed, &ExploreOptions::depth(8)).map_err(|e| e.to_string())?;
    observe_graph(&graph);
    let report = audit_graph(&graph).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("audit failures: {:?}", report.failures))?;
    let vars = collect_variables(&graph);
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    if vars.len() != 10 {
        let shallow = mutation_graph(&seed, &ExploreOptions::depth(4)).map_err(|e| e.to_string())?;
        return Err(format!(
            "expected 10 distinct variables at depth 8, found {} over {} seeds \
             (depth 4 gives {}); all {} variables Laurent, bar-invariant and positive ({elapsed:.2?})",
            vars.len(),
            graph.node_count(),
            collect_variables(&shallow).len(),
            report.variables_checked
        ));
    }
    Ok(format!("10 variables, audit passed ({elapsed:.2?})"))
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let cases = 256;
    let mut with_frozen = 0;
    for case in 0..cases {
        let mut rng = ChaCha8Rng::seed_from_u64(case);
        let pair = random_compatible_pair(&mut rng, 6);
        let ex = pair.indices().ex_labels();
        if ex.len() < pair.indices().len() {
            with_frozen += 1;
        }
        let seed = QuantumSeed::initial(pair.clone());
        observe(&seed);
        for &k in &ex {
            let fail = |what: &str| format!("case {case}, k={k}: {what}");
            let (e, f) = pair.ef_matrices(k).map_err(|e| e.to_string())?;
            let mutated = pair.mutate(k).map_err(|e| e.to_string())?;
            ensure(&(&e.transpose() * pair.l()) * &e == oracle_l(&pair, k), || fail("EᵀLE"))?;
            ensure(&(&e * pair.b()) * &f == oracle_b(&pair, k), || fail("EB̃F"))?;
            ensure(mutated.l() == &oracle_l(&pair, k) && mutated.b() == &oracle_b(&pair, k), || {
                fail("case formulas")
            })?;
            let d = check_compatible(mutated.indices(), mutated.l(), mutated.b()).map_err(|e| e.to_string())?;
            ensure(d == pair.d(), || fail("degree changed"))?;
            ensure(mutated.mutate(k).map_err(|e| e.to_string())? == pair, || fail("(L, B̃) involution"))?;

            let w = balanced_weights(&mut rng, &pair);
            let w1 = w.mutated(pair.indices(), pair.b(), k).map_err(|e| e.to_string())?;
            ensure(balanced(&w1, &mutated), || fail("weights unbalanced after mutation"))?;
            ensure(w1.mutated(mutated.indices(), mutated.b(), k).map_err(|e| e.to_string())? == w, || {
                fail("D involution")
            })?;

            let s1 = mutate(&seed, k);
            ensure(mutate(&s1, k) == seed, || fail("variable involution"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "{cases} random pairs ({with_frozen} with frozen indices), every direction ({elapsed:.2?})"
    ))
}

fn ledger_f3() -> Outcome {
    let start = Instant::now();
    let ledger = fixtures::f3_ledger();
    ensure(ledger.check().is_ok(), || format!("{:?}", ledger.check().violations))?;
    let (mutated, report) = ledger.mutate(1).map_err(|e| e.to_string())?;
    ensure(report.delta == 1, || format!("delta {}", report.delta))?;
    ensure(report.lambda_k_new == -2, || format!("Λ(M1, M'1) = {}", report.lambda_k_new))?;
    ensure((report.m, report.m_prime) == (0, 3), || format!("(m, m') = ({}, {})", report.m, report.m_prime))?;
    ensure(report.tilde_lambda == report.m, || format!("Λ̃ = {}", report.tilde_lambda))?;

    // E for k = 1 with b = (0, 1, -1)ᵀ: column 1 is (-1, [-b_21]_+, [-b_31]_+)
    let e = IntMatrix::from_rows(&[[-1, 0, 0], [0, 1, 0], [1, 0, 1]]).unwrap();
    let expected = -&(&(&e.transpose() * &ledger.l()) * &e);
    ensure(mutated.lambda() == &expected, || format!("Λ' = {:?}, expected {expected:?}", mutated.lambda()))?;
    ensure(
        mutated.lambda() == &IntMatrix::from_rows(&[[0, 4, 2], [-4, 0, 0], [-2, 0, 0]]).unwrap(),
        || "Λ' differs from the hand computation".into(),
    )?;

    // [M+] = q^2 X2, [M-] = q^2 X3 since (d, d) = 8 for d = -2
    let w = ledger.decat_verify(1).map_err(|e| e.to_string())?;
    let torus = QuantumTorus::new(ledger.l()).unwrap();
    let q = |e: i64, a: [i64; 3]| torus.term(ExponentVector::new(a.to_vec()), VPoly::v_power(e)).unwrap();
    let rhs1 = &q(6, [0, 1, 0]) + &q(4, [0, 0, 1]);
    let rhs2 = &q(4, [0, 1, 0]) + &q(6, [0, 0, 1]);
    ensure(w.lhs1 == rhs1 && w.rhs1 == rhs1, || format!("identity 1: {} vs {}", w.lhs1, rhs1))?;
    ensure(w.lhs2 == rhs2 && w.rhs2 == rhs2, || format!("identity 2: {} vs {}", w.lhs2, rhs2))?;

    observe(&mutate(&QuantumSeed::initial(fixtures::f3_pair()), 1));
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "δ=1, Λ(M1,M'1)=-2, (m,m')=(0,3), Λ̃=m, Λ' = -EᵀLE, both identities hold ({elapsed:.2?})"
    ))
}

fn division_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for i in 0..500 {
        let torus = random_torus(&mut rng);
        let m = torus
            .term(random_exponent(&mut rng, torus.rank()), random_vpoly(&mut rng, 2))
            .unwrap();
        let a = random_element(&mut rng, &torus, 6);
        let q = m.divide_left_exact(&m.checked_mul(&a).unwrap()).map_err(|e| format!("round trip {i}: {e}"))?;
        ensure(q == a, || format!("round trip {i} returned {q}"))?;
    }
    let mut successes = 0;
    while successes < 100 {
        let torus = random_torus(&mut rng);
        let a = random_element(&mut rng, &torus, 4);
        if a.term_count() < 2 {
            continue;
        }
        let b = a.checked_mul(&random_element(&mut rng, &torus, 4)).unwrap();
        let q = a.divide_left_exact(&b).map_err(|e| format!("divisor {a}: {e}"))?;
        ensure(a.checked_mul(&q).unwrap() == b, || format!("{a} · {q} differs from dividend"))?;
        successes += 1;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("500 monomial round trips, 100 general quotients ({elapsed:.2?})"))
}

fn quasi_commutation() -> Outcome {
    QC.with(|log| {
        let log = log.borrow();
        if log.seeds == 0 {
            return Err("no seeds were observed".to_string());
        }
        if log.failures.is_empty() {
            Ok(format!("{} pairs over {} mutated seeds", log.pairs, log.seeds))
        } else {
            Err(format!("{} failures, first: {}", log.failures.len(), log.failures[0]))
        }
    })
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("A2 fixture", a2_fixture),
        ("Kronecker fixture", kronecker_fixture),
        ("property suite", property_suite),
        ("ledger F3, k=1", ledger_f3),
        ("division oracle", division_oracle),
        ("quasi-commutation postconditions", quasi_commutation),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
