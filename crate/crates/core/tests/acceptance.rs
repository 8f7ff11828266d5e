//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{all_combinations, associative_cocycles_z2, same_associators};
use moufang_core::catalog::{self, generated_catalog, loop_by_name};
use moufang_core::chein::{central_involutions, is_chein_double, mg2, mg_theta_h, AntiAutomorphismData};
use moufang_core::code_loops::{
    build_code_loop, canonical_power_map, cdeg, execute_code_path, is_code_loop, plan_code_path, power_delta, radical,
    symplectic_analyze, CodeLoopError, PowerMap,
};
use moufang_core::constructions::{find_all_params, CyclicParams, DihedralParams, Params};
use moufang_core::explorer::{closure, ClosureOptions, ConstructionGraph};
use moufang_core::factor_sets::{
    associators_coincide, build_extension, check_associator_preservation, classify, derive_from_transversal, Action,
    FactorSet, FactorSetClass,
};
use moufang_core::par::Executor;
use moufang_core::sigma::{ominus, oplus, sigma_i, Window};
use moufang_core::{ElemSet, LoopTable};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || {
        format!("took {:.2}s, limit {}s", t.as_secs_f64(), limit.as_secs())
    })?;
    Ok(t)
}

fn graph(names: &[&str], threads: usize) -> ConstructionGraph {
    let seeds: Vec<LoopTable> = names.iter().map(|n| loop_by_name(n).unwrap()).collect();
    let opts = ClosureOptions {
        include_associative: false,
        executor: Executor::new(threads),
    };
    closure(&seeds, &opts).unwrap()
}

struct Graphs {
    g16: ConstructionGraph,
    g24: ConstructionGraph,
    g32: ConstructionGraph,
    times: [Duration; 3],
}

impl Graphs {
    fn build() -> Graphs {
        let t = Instant::now();
        let g16 = graph(&["mg2:d8"], 0);
        let t16 = t.elapsed();
        let t = Instant::now();
        let g24 = graph(&["mg2:d12", "mg2:a4"], 0);
        let t24 = t.elapsed();
        let t = Instant::now();
        let g32 = graph(&["mg2:d8xc2", "mg2:d16"], 0);
        let t32 = t.elapsed();
        Graphs {
            g16,
            g24,
            g32,
            times: [t16, t24, t32],
        }
    }
}

fn sigma_identities() -> Outcome {
    let start = Instant::now();
    let mut checks = 0u64;
    for m in 1..=8 {
        let w = Window::new(m).ok_or("bad window")?;
        let s = |i| sigma_i(i, w);
        for i in w.elements() {
            for j in w.elements() {
                let ij = oplus(i, j, w).unwrap();
                for k in w.elements() {
                    let jk = oplus(j, k, w).unwrap();
                    let j_k = ominus(j, k, w).unwrap();
                    ensure(s(i + j) + s(ij + k) == s(j + k) + s(i + jk), || {
                        format!("first, m={m} ({i},{j},{k})")
                    })?;
                    ensure(-s(i + j) + s(1 - ij + k) == s(1 - j + k) - s(i + j_k), || {
                        format!("second, m={m} ({i},{j},{k})")
                    })?;
                    checks += 1;
                }
            }
        }
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("{checks} triples per identity, {:.3}s", t.as_secs_f64()))
}

fn preservation() -> Outcome {
    let start = Instant::now();
    let mut tuples = 0;
    for e in generated_catalog(16) {
        let l = &e.table;
        let n = l.order();
        let (nucleus, assoc) = (l.nucleus(), l.associator_subloop());
        for p in find_all_params(l) {
            let t = p.apply(l).map_err(|err| format!("{}: {p}: {err}", e.name))?;
            let fail = |what: &str| format!("{}: {p}: {what}", e.name);
            ensure(t.is_moufang(), || fail("not Moufang"))?;
            ensure(same_associators(l, &t), || fail("associators changed"))?;
            ensure(t.nucleus() == nucleus, || fail("nucleus changed"))?;
            ensure(t.associator_subloop() == assoc, || fail("associator subloop changed"))?;
            ensure(4 * l.distance(&t).unwrap() == n * n, || fail("distance"))?;
            tuples += 1;
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("{tuples} tuples, {:.2}s", t.as_secs_f64()))
}

fn d8_to_q8() -> Outcome {
    let start = Instant::now();
    let d8 = catalog::dihedral(4);
    let q8 = catalog::dicyclic(2);
    let rot = ElemSet::from_iter_n(8, 0..4);
    let cp = CyclicParams::new(&d8, &rot, 4, 2).map_err(|e| e.to_string())?;
    let star = Params::Cyclic(cp).apply(&d8).unwrap();
    ensure(star.is_isomorphic(&q8).is_some(), || "cyclic output is not Q8".into())?;
    let md = mg2(&d8).unwrap();
    let s = ElemSet::from_iter_n(16, 0..4);
    let dp = DihedralParams::new(&md.table, &s, md.bar(4), md.bar(0), 2).map_err(|e| e.to_string())?;
    let out = Params::Dihedral(dp).apply(&md.table).unwrap();
    ensure(out == mg2(&star).unwrap().table, || {
        "dihedral output is not M((D8,*), 2)".into()
    })?;
    ensure(out.is_isomorphic(&mg2(&q8).unwrap().table).is_some(), || {
        "not M(Q8, 2)".into()
    })?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("{:.3}s", t.as_secs_f64()))
}

fn shape(g: &ConstructionGraph) -> Vec<(usize, usize, usize)> {
    g.components()
        .iter()
        .map(|c| (c.size, c.nucleus, c.associator_subloop))
        .collect()
}

fn connectivity(gs: &Graphs) -> Outcome {
    let sizes = |g: &ConstructionGraph| g.components().iter().map(|c| c.size).collect::<Vec<_>>();
    ensure(gs.g16.nodes.len() == 5 && sizes(&gs.g16) == [5], || {
        format!("order 16: {:?}", sizes(&gs.g16))
    })?;
    ensure(sizes(&gs.g24) == [4, 1], || format!("order 24: {:?}", sizes(&gs.g24)))?;
    ensure(sizes(&gs.g32) == [60, 11], || format!("order 32: {:?}", sizes(&gs.g32)))?;
    for (g, n) in [(&gs.g16, 16), (&gs.g24, 24), (&gs.g32, 32)] {
        ensure(g.classes_distinct() && g.is_undirected() && g.witnesses_valid(), || {
            format!("order {n} graph checks")
        })?;
    }
    let [a, b, c] = gs.times;
    ensure(
        a < Duration::from_secs(10) && b < Duration::from_secs(60) && c < Duration::from_secs(900),
        || format!("times {a:?} {b:?} {c:?}"),
    )?;
    Ok(format!(
        "16: 5 in 1 ({:.2}s); 24: 4+1 ({:.2}s); 32: 60+11 ({:.2}s)",
        a.as_secs_f64(),
        b.as_secs_f64(),
        c.as_secs_f64()
    ))
}

fn invariant_table(gs: &Graphs) -> Outcome {
    let pairs = |g: &ConstructionGraph| {
        g.components()
            .iter()
            .map(|c| (c.uniform, c.nucleus, c.associator_subloop))
            .collect::<Vec<_>>()
    };
    let expect = [
        (&gs.g16, vec![(true, 2, 2)]),
        (&gs.g24, vec![(true, 2, 3), (true, 1, 4)]),
        (&gs.g32, vec![(true, 4, 2), (true, 2, 4)]),
    ];
    for (g, want) in expect {
        ensure(pairs(g) == want, || format!("order {}: {:?}", g.order, shape(g)))?;
    }
    Ok("(2,2); (2,3)/(1,4); (4,2)/(2,4)".into())
}

fn code_loop_suite(gs: &Graphs) -> Outcome {
    for n in &gs.g16.nodes {
        ensure(is_code_loop(&n.table), || format!("class {} is not a code loop", n.id))?;
        let d = symplectic_analyze(&n.table).ok_or("no symplectic data")?;
        ensure(radical(&d.power).unwrap().is_empty(), || {
            format!("class {} has a radical", n.id)
        })?;
    }
    let gamma = loop_by_name("mg2:g16_gamma2c1").unwrap();
    ensure(gamma.is_moufang() && !is_code_loop(&gamma), || {
        "M(16Γ2c1, 2) status".into()
    })?;
    let witness = loop_by_name("mg2:d8xc2").unwrap();
    ensure(is_code_loop(&witness), || "M(D8×C2, 2) is not a code loop".into())?;
    let (a, b) = (
        gs.g32.find_class(&gamma).ok_or("16Γ2c1 double not found")?,
        gs.g32.find_class(&witness).unwrap(),
    );
    let comps = gs.g32.components();
    ensure(
        comps.iter().any(|c| c.nodes.contains(&a) && c.nodes.contains(&b)),
        || "different components".into(),
    )?;
    let mut checked = 0;
    for n in &gs.g16.nodes {
        for p in find_all_params(&n.table) {
            let t = p.apply(&n.table).unwrap();
            match power_delta(&n.table, &t, &p) {
                Ok(d) => {
                    ensure(d.matches_formula() && d.classification_holds(), || {
                        format!("class {}: {p}", n.id)
                    })?;
                    checked += 1;
                }
                Err(CodeLoopError::NotApplicable) => {}
                Err(e) => return Err(format!("class {}: {p}: {e}", n.id)),
            }
        }
    }
    ensure(checked > 0, || "no applicable tuples".into())?;
    Ok(format!(
        "5 classes with trivial radical; 16Γ2c1 double in the D8×C2 component; {checked} deltas"
    ))
}

fn power_maps(dim: u32) -> Vec<PowerMap> {
    let count = 1u64 << ((1u64 << dim) - 1);
    (0..count).map(|m| PowerMap::from_mask(dim, m << 1).unwrap()).collect()
}

fn code_paths() -> Outcome {
    let start = Instant::now();
    let maps = power_maps(3);
    let mut pairs = 0;
    for p in maps.iter().filter(|p| cdeg(p) <= 3) {
        let startl = build_code_loop(p).map_err(|e| e.to_string())?;
        for r in &maps {
            if cdeg(&r.add(p).unwrap()) > 2 {
                continue;
            }
            let steps = plan_code_path(p, r).map_err(|e| format!("{p} -> {r}: {e}"))?;
            let path = execute_code_path(&startl, 3, &steps).map_err(|e| format!("{p} -> {r}: {e}"))?;
            let end = path.last().unwrap_or(&startl);
            ensure(canonical_power_map(end, 3).unwrap() == *r, || {
                format!("{p} -> {r} missed")
            })?;
            pairs += 1;
        }
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("{pairs} pairs, {:.2}s", t.as_secs_f64()))
}

fn factor_set_oracle(gs: &Graphs) -> Outcome {
    let mut loops: Vec<(String, LoopTable)> = generated_catalog(16).into_iter().map(|e| (e.name, e.table)).collect();
    loops.extend(
        gs.g16
            .nodes
            .iter()
            .map(|n| (format!("class16/{}", n.id), n.table.clone())),
    );
    let mut triples = 0;
    for (name, l) in &loops {
        for p in find_all_params(l) {
            let d = derive_from_transversal(l, &p).map_err(|e| format!("{name}: {p}: {e}"))?;
            let fail = |what: &str| format!("{name}: {p}: {what}");
            ensure(classify(&d.mu) == FactorSetClass::AssociativeFactorSet, || fail("mu"))?;
            ensure(classify(&d.eta) >= FactorSetClass::MoufangFactorSet, || fail("eta"))?;
            ensure(classify(&d.eta_star) >= FactorSetClass::MoufangFactorSet, || {
                fail("eta*")
            })?;
            let ext = build_extension(&d.eta).map_err(|e| fail(&e.to_string()))?;
            let ext_star = build_extension(&d.eta_star).map_err(|e| fail(&e.to_string()))?;
            ensure(
                d.theta.verify(&ext, l) && d.theta.verify(&ext_star, &p.apply(l).unwrap()),
                || fail("round trip"),
            )?;
            let predicted = check_associator_preservation(&d.eta, &d.mu).unwrap();
            ensure(
                predicted && predicted == associators_coincide(&d.eta, &d.mu).unwrap(),
                || fail("preservation"),
            )?;
            triples += 1;
        }
    }
    // both truth directions over M(S3, 2)
    let q = loop_by_name("mg2:s3").unwrap();
    let eta = FactorSet::zero(Action::trivial(q.clone(), 2));
    let base = build_extension(&eta).unwrap();
    let (mut kept, mut changed) = (0, 0);
    for mu in all_combinations(&associative_cocycles_z2(&q)) {
        let predicted = check_associator_preservation(&eta, &mu).unwrap();
        let brute = same_associators(&base, &build_extension(&eta.sum(&mu).unwrap()).unwrap());
        ensure(
            predicted == brute && brute == associators_coincide(&eta, &mu).unwrap(),
            || "M(S3,2) mismatch".into(),
        )?;
        if brute {
            kept += 1;
        } else {
            changed += 1;
        }
    }
    ensure(kept > 0 && changed > 0, || format!("kept {kept}, changed {changed}"))?;
    Ok(format!("{triples} triples; M(S3,2): {kept} kept, {changed} changed"))
}

fn twisted_separation() -> Outcome {
    let order8: Vec<(String, LoopTable)> = generated_catalog(8)
        .into_iter()
        .filter(|e| e.table.order() == 8 && e.table.is_associative())
        .map(|e| (e.name, e.table))
        .collect();
    let doubles: Vec<LoopTable> = order8.iter().map(|(_, g)| mg2(g).unwrap().table).collect();
    let mut built = 0;
    for (name, g) in &order8 {
        for h in central_involutions(g) {
            let t = mg_theta_h(&AntiAutomorphismData::inversion(g, h).unwrap()).unwrap();
            ensure(is_chein_double(&t).is_none(), || {
                format!("{name}, h={h}: recognized as a double")
            })?;
            ensure(doubles.iter().all(|d| d.is_isomorphic(&t).is_none()), || {
                format!("{name}, h={h}: isomorphic")
            })?;
            built += 1;
        }
    }
    let d8 = catalog::dihedral(4);
    let t = mg_theta_h(&AntiAutomorphismData::inversion(&d8, 2).unwrap()).unwrap();
    let fours = t.element_orders().count_of(4);
    ensure(fours == 10, || format!("{fours} elements of order 4"))?;
    Ok(format!(
        "{built} loops over {} groups; D8 instance has 10 elements of order 4",
        order8.len()
    ))
}

fn determinism() -> Outcome {
    let a = graph(&["mg2:d8"], 1);
    let b = graph(&["mg2:d8"], 8);
    ensure(a.export_dot() == b.export_dot(), || "DOT differs".into())?;
    ensure(a.summary().to_json() == b.summary().to_json(), || {
        "report differs".into()
    })?;
    Ok("DOT and report identical at 1 and 8 threads".into())
}

fn run(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panic: {msg}"))
    });
    match &outcome {
        Ok(detail) => println!("criterion {n:>2} {name}: PASS ({detail})"),
        Err(detail) => println!("criterion {n:>2} {name}: FAIL ({detail})"),
    }
    outcome.is_ok()
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let graphs = panic::catch_unwind(Graphs::build).ok();
    let graphs = graphs.as_ref();
    let need = |f: fn(&Graphs) -> Outcome| {
        move || match graphs {
            Some(g) => f(g),
            None => Err("closure search panicked".into()),
        }
    };
    let results = [
        run(1, "sigma identities", sigma_identities),
        run(2, "construction preservation", preservation),
        run(3, "D8 to Q8", d8_to_q8),
        run(4, "connectivity", need(connectivity)),
        run(5, "invariant table", need(invariant_table)),
        run(6, "code loops", need(code_loop_suite)),
        run(7, "code paths at dim 3", code_paths),
        run(8, "factor-set oracle", need(factor_set_oracle)),
        run(9, "twisted doubles", twisted_separation),
        run(10, "determinism", determinism),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
