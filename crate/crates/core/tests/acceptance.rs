//! Acceptance criteria, one line each. Run with
//! `cargo test --test acceptance`; exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use gandy::colimit::density_check;
use gandy::fincat::{validate_functor, TapeSubcategory};
use gandy::kan_eval::{equivalence_sweep, evaluate, explain};
use gandy::machine::{
    adjunction_sweep, minimality_violations, shape_category, universality_check,
    CausalNeighbourhood, Machine, MachineSpec, ShapeCategory, ShiftedWindow, UniversalityBounds,
    UpdateFunctor,
};
use gandy::tape::{all_strings, hom, parse_tape, Alphabet, Occurrence, TapeString};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn t(s: &str) -> TapeString {
    parse_tape(&Alphabet::binary(), s).unwrap()
}

fn paper_machine() -> Machine {
    Machine::new(MachineSpec::black_spread()).unwrap()
}

fn paper_shape(m: &Machine) -> ShapeCategory {
    shape_category(m, &TapeSubcategory::canonical(m.alphabet()))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Median wall time of `f` over `runs` calls.
fn median_time(runs: usize, mut f: impl FnMut()) -> Duration {
    let mut times: Vec<Duration> = (0..runs)
        .map(|_| {
            let s = Instant::now();
            f();
            s.elapsed()
        })
        .collect();
    times.sort();
    times[runs / 2]
}

fn worked_example() -> Verdict {
    let m = paper_machine();
    let p = paper_shape(&m);
    let x = t("#...#.");
    let oracle = m.apply(&x).unwrap();
    let categorical = evaluate(&p, &x).unwrap();
    ensure(oracle == t("#.##"), || format!("apply gave {oracle}"))?;
    ensure(categorical == oracle, || {
        format!("evaluate gave {categorical}")
    })?;
    let ta = median_time(101, || drop(m.apply(&x)));
    let te = median_time(101, || drop(evaluate(&p, &x)));
    let limit = Duration::from_millis(1);
    ensure(ta < limit && te < limit, || {
        format!("apply {ta:?}, evaluate {te:?}")
    })?;
    Ok(format!(
        "#...#. -> #.## both engines; apply {ta:?}, evaluate {te:?}"
    ))
}

fn hom_example() -> Verdict {
    let offsets: Vec<usize> = hom(&t("#.##"), &t("#.##.##"))
        .unwrap()
        .iter()
        .map(|o| o.offset())
        .collect();
    ensure(offsets == [0, 3], || format!("got {offsets:?}"))?;
    Ok("offsets {0, 3}".into())
}

fn shape_table() -> Verdict {
    let got: BTreeSet<TapeString> = paper_machine()
        .shape_table(&t("#"))
        .unwrap()
        .into_iter()
        .collect();
    let want: BTreeSet<TapeString> = ["###", "##.", "#.#", "#..", ".##", ".#.", "..#"]
        .into_iter()
        .map(t)
        .collect();
    ensure(got == want, || format!("got {got:?}"))?;
    Ok("7 windows".into())
}

fn causal_neighbourhood() -> Verdict {
    let x = t("#...#.");
    let e = explain(&paper_machine(), &x, 2..4).map_err(|e| e.to_string())?;
    ensure(e.window == Occurrence::window(&x, 2, 4), || {
        format!("got {}", e.window)
    })?;
    ensure(e.neighbourhood() == &t("..#."), || {
        "wrong neighbourhood".into()
    })?;
    Ok(format!("{}", e.window))
}

fn equivalence() -> Verdict {
    let m = paper_machine();
    let r = equivalence_sweep(&m, &paper_shape(&m), 12);
    ensure(r.inputs == 8191, || format!("{} inputs", r.inputs))?;
    ensure(r.passes(), || r.mismatches[0].to_string())?;
    ensure(r.elapsed < Duration::from_secs(60), || {
        format!("took {:?}", r.elapsed)
    })?;
    Ok(r.to_string())
}

fn density() -> Verdict {
    let g = TapeSubcategory::canonical(&Alphabet::binary());
    let start = Instant::now();
    let inputs = all_strings(&Alphabet::binary(), 10);
    for x in &inputs {
        let o = density_check(x, &g);
        ensure(o.holds, || {
            format!("{x}: {}", o.diagnostic.clone().unwrap_or_default())
        })?;
    }
    let elapsed = start.elapsed();
    ensure(inputs.len() == 2047, || format!("{} inputs", inputs.len()))?;
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "inputs={} elapsed={:.3}s",
        inputs.len(),
        elapsed.as_secs_f64()
    ))
}

fn functoriality() -> Verdict {
    let m = paper_machine();
    let report = validate_functor(&UpdateFunctor::new(&m), Some(6)).map_err(|e| e.to_string())?;
    ensure(report.is_ok(), || report.to_string())?;
    Ok("0 violations up to length 6".into())
}

fn adjunction() -> Verdict {
    let m = paper_machine();
    let g = TapeSubcategory::canonical(m.alphabet());
    let sweep = adjunction_sweep(&m, &CausalNeighbourhood, &g, 8);
    ensure(sweep.passes(), || {
        sweep.failures[0].first_counterexample().unwrap_or_default()
    })?;
    for a in &g.strings {
        let v = minimality_violations(&m, a).map_err(|e| e.to_string())?;
        ensure(v.is_empty(), || format!("{a}: smaller window {}", v[0]))?;
    }
    Ok(format!(
        "states={} parts={} candidates={} violations=0; windows minimal",
        sweep.states, sweep.parts, sweep.candidates
    ))
}

fn gandy(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_gandy"))
        .args(args)
        .output()
        .ok()?
        .status
        .code()
}

fn mutation_sensitivity() -> Verdict {
    let m = paper_machine();
    let g = TapeSubcategory::canonical(m.alphabet());

    // shifted windows: rejected by the universality check itself, with a
    // candidate that has the wrong number of mediators
    for shift in [-1, 1] {
        let sweep = adjunction_sweep(&m, &ShiftedWindow { shift }, &g, 6);
        let genuine = sweep
            .failures
            .iter()
            .any(|r| r.explanation.is_ok() && !r.failures.is_empty());
        ensure(genuine, || {
            format!("shift {shift} not caught by a mediator count")
        })?;
    }
    let x = t("#...#.");
    let p = Occurrence::window(&m.apply(&x).unwrap(), 2, 2);
    let r = universality_check(
        &m,
        &ShiftedWindow { shift: -1 },
        &p,
        &x,
        UniversalityBounds::default_for(&m, 2, 6),
    )
    .map_err(|e| e.to_string())?;
    ensure(!r.passes(), || {
        "shift -1 passes on the worked example".into()
    })?;

    // deleting any object with a non-empty window breaks evaluation
    let shape = paper_shape(&m);
    let mut caught = 0;
    for (k, o) in shape.objects.iter().enumerate() {
        if o.window.is_empty() {
            continue;
        }
        let r = equivalence_sweep(&m, &shape.without_object(k), 8);
        ensure(!r.passes(), || {
            format!("deleting {} went unnoticed", o.name())
        })?;
        caught += 1;
    }

    let machine = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../machines/spread.machine");
    let machine = machine.to_str().unwrap();
    let code = gandy(&[
        "check",
        machine,
        "adjunction",
        "--max-len",
        "5",
        "--mutate-window-shift",
        "1",
    ]);
    ensure(code == Some(2), || {
        format!("check with shifted windows exited {code:?}")
    })?;
    let code = gandy(&[
        "run",
        machine,
        "--input",
        "..#",
        "--drop-shape-object",
        "#,..#",
    ]);
    ensure(code == Some(3), || {
        format!("run with a deleted object exited {code:?}")
    })?;
    Ok(format!(
        "window shifts +-1 flagged; {caught}/{caught} object deletions flagged; exit codes 2 and 3"
    ))
}

fn colimit_universality() -> Verdict {
    let tally = common::colimit_universality_sweep(4, 3);
    ensure(tally.violations.is_empty(), || tally.violations[0].clone())?;
    Ok(format!(
        "diagrams={} glued={} violations=0",
        tally.diagrams, tally.glued
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked example", worked_example),
        ("hom example", hom_example),
        ("shape table", shape_table),
        ("causal neighbourhood", causal_neighbourhood),
        ("equivalence sweep", equivalence),
        ("density", density),
        ("functoriality", functoriality),
        ("adjunction universality", adjunction),
        ("mutation sensitivity", mutation_sensitivity),
        ("colimit universality", colimit_universality),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
