//! The acceptance suite: one PASS or FAIL line per criterion, nonzero exit if
//! any fails. Runs without the libtest harness so the lines always show.

mod common;

use qtt_core::cli::{dump_erased_in, load};
use qtt_core::core::{DefKind, Term};
use qtt_core::erasure::{check_erased, erase_all};
use qtt_core::error::ErrorKind;
use qtt_core::multiplicity::{admissible, Multiplicity, Omega, One, Zero};
use qtt_core::runtime::{run_main, Input, Program};
use qtt_core::session::{corpus_source, Session};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rejected(rel: &str) -> Result<qtt_core::error::Error, String> {
    match load(&common::corpus_path(rel)) {
        Ok(_) => Err(format!("{rel} was accepted")),
        Err(mut es) => Ok(es.remove(0)),
    }
}

fn unsolved(t: &Term, s: &Session) -> bool {
    match t {
        Term::Meta(m, _) => s.elab.metas.solution(*m).is_none(),
        Term::Pi(_, a, b) => unsolved(a, s) || unsolved(b, s),
        Term::Lam(_, b) => unsolved(b, s),
        Term::App(f, a, _, _) => unsolved(f, s) || unsolved(a, s),
        Term::Let(_, ty, v, b) => unsolved(ty, s) || unsolved(v, s) || unsolved(b, s),
        Term::Case(x, _, arms, d) => {
            unsolved(x, s) || arms.iter().any(|a| unsolved(&a.body, s)) || d.as_ref().is_some_and(|d| unsolved(d, s))
        }
        _ => false,
    }
}

fn corpus_acceptance() -> Check {
    let start = Instant::now();
    let mut s = Session::new();
    for name in common::POSITIVE.iter().skip(1) {
        s.load_module(name, corpus_source(name).unwrap(), None).map_err(|es| format!("{name}: {}", es[0]))?;
    }
    for d in &s.elab.globals.defs {
        ensure!(!unsolved(&d.ty, &s), "{} has an unsolved meta in its type", d.name);
        if let DefKind::Fun { clauses, .. } = &d.kind {
            ensure!(!clauses.iter().any(|c| unsolved(&c.rhs, &s)), "{} has an unsolved meta", d.name);
        }
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(10), "took {took:?}");
    Ok(())
}

fn linearity_rejection() -> Check {
    let e = rejected("reject/dup.qtt")?;
    ensure!(e.message.contains("There are 2 uses of linear name x"), "dup: {e}");
    let e = rejected("reject/uncompress_cheat.qtt")?;
    ensure!(e.kind == ErrorKind::ErasedUsage, "uncompress_cheat: {e}");
    Ok(())
}

fn repl_type_fidelity() -> Check {
    let golden = std::fs::read_to_string(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/printf.out")).map_err(|e| e.to_string())?;
    let want = golden.lines().nth(1).unwrap_or_default();
    let mut s = common::session_with("printf");
    let got = s.type_of("printf (Num (Lit \" \" (Str End)))").map_err(|e| e.to_string())?;
    ensure!(got == want, "{got:?} vs golden {want:?}");
    ensure!(got.ends_with(": Int -> String -> String"), "{got}");
    Ok(())
}

fn hole_fidelity() -> Check {
    let s = load(&common::fixture_path("id_explicit.qtt")).map_err(|e| e[0].to_string())?;
    let r = s.hole("id_explicit_rhs").map_err(|e| e.to_string())?;
    let lines: Vec<&str> = r.lines().collect();
    let a = lines.iter().position(|l| l.trim_start() == "0 a : Type");
    let x = lines.iter().position(|l| l.ends_with(" x : a") && l.trim_start() == "x : a");
    ensure!(matches!((a, x), (Some(a), Some(x)) if a < x), "id_explicit_rhs:\n{r}");
    let s = load(&common::fixture_path("dup_holes.qtt")).map_err(|e| e[0].to_string())?;
    let r = s.hole("second_x").map_err(|e| e.to_string())?;
    ensure!(r.lines().any(|l| l.trim_start() == "0 x : a"), "second_x:\n{r}");
    Ok(())
}

fn erasure_guarantee() -> Check {
    let s = Session::new();
    let append = dump_erased_in(&s, "append").map_err(|e| e.to_string())?;
    ensure!(append.ends_with("-- parameters: 2, checkErased: true\n"), "{append}");
    let length = dump_erased_in(&s, "length").map_err(|e| e.to_string())?;
    ensure!(length == "length n arg2 = n\n-- parameters: 2, checkErased: true\n", "{length}");
    let full = common::full_session();
    let gs = &full.elab.globals;
    for d in erase_all(gs).map_err(|e| e.to_string())? {
        ensure!(check_erased(gs, &d, d.global), "{}", d.display(gs));
    }
    Ok(())
}

fn semiring_suite() -> Check {
    const ALL: [Multiplicity; 3] = [Zero, One, Omega];
    let count = |m: Multiplicity| match m {
        Zero => 0u8,
        One => 1,
        Omega => 2,
    };
    let back = |n: u8| [Zero, One, Omega][n.min(2) as usize];
    for a in ALL {
        for b in ALL {
            ensure!(a.add(b) == back(count(a) + count(b)), "{a:?} + {b:?}");
            ensure!(a.mul(b) == back(count(a) * count(b)), "{a:?} * {b:?}");
            for c in ALL {
                ensure!(a.add(b).add(c) == a.add(b.add(c)), "+ assoc");
                ensure!(a.mul(b).mul(c) == a.mul(b.mul(c)), "* assoc");
                ensure!(a.mul(b.add(c)) == a.mul(b).add(a.mul(c)), "left distributivity");
                ensure!(b.add(c).mul(a) == b.mul(a).add(c.mul(a)), "right distributivity");
            }
        }
    }
    // Declared multiplicity against use: zero only with zero, one only with
    // one, unrestricted with anything.
    for d in ALL {
        for u in ALL {
            let want = match d {
                Zero => u == Zero,
                One => u == One,
                Omega => true,
            };
            ensure!(admissible(d, u) == want, "admissible({d:?}, {u:?})");
        }
    }
    Ok(())
}

fn usage_oracle() -> Check {
    let (checked, failures) = common::usage::check_corpus(&common::full_session());
    ensure!(failures.is_empty(), "{failures:?}");
    ensure!(checked > 50, "only {checked} binders checked");
    Ok(())
}

fn run_length_round_trip() -> Check {
    let start = Instant::now();
    let mut s = common::session_with("rle");
    let mut rng = StdRng::seed_from_u64(0xacce);
    let rep = |n: usize, x: i64| vec![x; n];
    for _ in 0..200 {
        let target = rng.random_range(0..=20usize);
        let mut runs = Vec::new();
        let mut len = 0;
        while len < target {
            let n = rng.random_range(0..(target - len));
            runs.push((n, rng.random_range(0..3i64)));
            len += n + 1;
        }
        let want = runs.iter().fold(Vec::new(), |acc, (n, x)| [acc, rep(n + 1, *x)].concat());
        let src = runs.iter().rev().fold("Empty".to_string(), |acc, (n, x)| format!("Run {n} {x} ({acc})"));
        let got = s.normalize(&format!("uncompress ({src})")).map_err(|e| e.to_string())?;
        let shown: Vec<String> = want.iter().map(i64::to_string).collect();
        ensure!(got == format!("Val [{}]", shown.join(", ")), "{runs:?} gave {got}");
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(5), "took {took:?}");
    Ok(())
}

fn session_execution() -> Check {
    let p = Program::new(&common::session_with("utils").elab.globals).map_err(|e| e.to_string())?;
    for (entry, out) in [("main", "5\n"), ("mainReverse", "cba\n")] {
        let first = run_main(&p, entry, Input::script(""), false);
        ensure!(first.error.is_none(), "{entry}: {:?}", first.error);
        ensure!(first.stdout == out, "{entry} printed {:?}", first.stdout);
        ensure!(first.live_channels == 0 && first.blocked.is_empty(), "{entry} left channels or processes behind");
        for _ in 0..100 {
            let again = run_main(&p, entry, Input::script(""), false);
            ensure!(again.stdout == first.stdout && again.transcript == first.transcript, "{entry} is not deterministic");
        }
    }
    Ok(())
}

fn protocol_rejections() -> Check {
    let e = rejected("reject/client_send_early.qtt")?;
    ensure!(e.kind == ErrorKind::TypeMismatch, "client_send_early: {e}");
    let e = rejected("reject/server_no_close.qtt")?;
    ensure!(e.kind == ErrorKind::LinearityError, "server_no_close: {e}");
    Ok(())
}

fn atm_protocol() -> Check {
    let p = Program::new(&common::session_with("atm").elab.globals).map_err(|e| e.to_string())?;
    let o = run_main(&p, "runATM", Input::script("100\n"), false);
    ensure!(o.exit_ok(), "{:?}", o.error);
    let want = "Card inserted\nChecking PIN\nEnter amount:\nDispensing 100\nCard ejected\nShutting down\n";
    ensure!(o.stdout == want, "{:?}", o.stdout);
    let e = rejected("reject/atm_no_eject.qtt")?;
    ensure!(e.kind == ErrorKind::TypeMismatch, "atm_no_eject: {e}");
    Ok(())
}

fn case_tree_equivalence() -> Check {
    let st = common::trees::compare(&common::full_session())?;
    ensure!(st.functions > 30 && st.compared > 1000, "only {} functions, {} inputs", st.functions, st.compared);
    Ok(())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("corpus elaborates with no unsolved metas in under 10s", corpus_acceptance),
        ("duplicate and erased uses are rejected", linearity_rejection),
        ("printf type at the REPL matches the golden file", repl_type_fidelity),
        ("hole reports show multiplicities in order", hole_fidelity),
        ("erased definitions have the expected arity and pass checkErased", erasure_guarantee),
        ("semiring laws and admissibility table", semiring_suite),
        ("linear binders are used exactly once, erased ones never", usage_oracle),
        ("run-length decoding matches the host oracle", run_length_round_trip),
        ("utility sessions print their results deterministically", session_execution),
        ("protocol violations are rejected", protocol_rejections),
        ("ATM transcript and no-eject rejection", atm_protocol),
        ("case trees agree with clause matching", case_tree_equivalence),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (what, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(()) => println!("PASS criterion {}: {what}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {what}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
