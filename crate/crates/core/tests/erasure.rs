mod common;

use common::{corpus_functions, first_order, full_session, telescope, to_runtime, Gen};
use qtt_core::cli::dump_erased_in;
use qtt_core::core::DefKind;
use qtt_core::erasure::{check_erased, erase_all, Eraser, RBinder, RTerm, RuntimeDef};
use qtt_core::multiplicity::Multiplicity;
use qtt_core::runtime::{show_value, Input, Machine, Program, REnv};
use qtt_core::session::Session;

#[test]
fn append_loses_its_implicits() {
    let s = Session::new();
    let out = dump_erased_in(&s, "append").unwrap();
    assert!(out.ends_with("-- parameters: 2, checkErased: true\n"), "{out}");
    assert!(out.starts_with("append "), "{out}");
}

#[test]
fn length_keeps_its_explicit_index() {
    let s = Session::new();
    let out = dump_erased_in(&s, "length").unwrap();
    assert_eq!(out, "length n arg2 = n\n-- parameters: 2, checkErased: true\n");
}

#[test]
fn id_explicit_is_unary() {
    let mut s = Session::new();
    s.load_module("main", "id_explicit : (0 a : Type) -> a -> a\nid_explicit a x = x\n", None).unwrap();
    let out = dump_erased_in(&s, "id_explicit").unwrap();
    assert_eq!(out, "id_explicit arg1 = arg1\n-- parameters: 1, checkErased: true\n");
}

#[test]
fn whole_corpus_passes_the_erasure_check() {
    let s = full_session();
    let gs = &s.elab.globals;
    let defs = erase_all(gs).unwrap();
    assert!(defs.len() > 40);
    for d in &defs {
        assert!(check_erased(gs, d, d.global), "{}", d.display(gs));
    }
}

#[test]
fn arity_is_the_number_of_runtime_pis() {
    let s = full_session();
    let gs = &s.elab.globals;
    let er = Eraser::new(gs);
    for (g, arity) in corpus_functions(gs) {
        let d = er.erase_def(g).unwrap();
        let want = telescope(&gs.get(g).ty, arity).iter().filter(|(m, _, _)| *m != Multiplicity::Zero).count();
        assert_eq!(d.params.len(), want, "{}", gs.name(g));
    }
}

#[test]
fn leaks_are_caught() {
    let s = Session::new();
    let gs = &s.elab.globals;
    let g = s.global("append").unwrap();
    let good = Eraser::new(gs).erase_def(g).unwrap();
    assert!(check_erased(gs, &good, g));

    let dangling = RuntimeDef { body: RTerm::Var(2), ..good.clone() };
    assert!(!check_erased(gs, &dangling, g));

    let mut extra = good.clone();
    extra.params.insert(0, RBinder { name: "n".into(), mult: Multiplicity::Zero });
    assert!(!check_erased(gs, &extra, g));

    let cons = gs.find_con("::").unwrap();
    let short = RuntimeDef { body: RTerm::Con(cons, vec![RTerm::Var(0)]), ..good };
    assert!(!check_erased(gs, &short, g));
}

#[test]
fn erased_ids_of_zero_binders_never_appear() {
    let s = full_session();
    let gs = &s.elab.globals;
    let er = Eraser::new(gs);
    for (g, _) in corpus_functions(gs) {
        let DefKind::Fun { clauses, .. } = &gs.get(g).kind else { unreachable!() };
        for c in clauses {
            let (binders, _) = er.erase_clause(c).unwrap();
            let want = c.mults.iter().filter(|m| **m != Multiplicity::Zero).count();
            assert_eq!(binders.len(), want, "{}", gs.name(g));
            assert!(binders.iter().all(|b| b.mult != Multiplicity::Zero));
        }
    }
}

/// Running the erased definition on the run-time parts of ground inputs
/// gives the run-time image of what the core evaluator computes.
#[test]
fn erasure_preserves_semantics() {
    let s = full_session();
    let gen = Gen::new(&s);
    let gs = &s.elab.globals;
    let prog = Program::new(gs).unwrap();
    let mut compared = 0;
    for (g, arity) in corpus_functions(gs) {
        let DefKind::Fun { tree, .. } = &gs.get(g).kind else { unreachable!() };
        let mults: Vec<Multiplicity> = telescope(&gs.get(g).ty, arity).into_iter().map(|(m, _, _)| m).collect();
        for (args, ground) in gen.arg_tuples(g, arity, 3, 300) {
            if !ground {
                continue;
            }
            let Some(core) = gen.ev.eval_tree(tree, args.clone()) else { continue };
            if !first_order(gs, &gen.ev, &core) {
                continue;
            }
            let want = show_value(gs, &to_runtime(gs, &gen.ev, &core).unwrap());
            let rargs: Vec<_> = args
                .iter()
                .zip(&mults)
                .filter(|(_, m)| **m != Multiplicity::Zero)
                .map(|(a, _)| to_runtime(gs, &gen.ev, a).expect("ground argument"))
                .collect();
            let mut m = Machine::new(&prog, Input::script(""));
            let f = m.eval(&REnv::default(), &RTerm::Global(g)).unwrap();
            let got = m.apply_all(f, rargs).unwrap_or_else(|e| panic!("{}: {e}", gs.name(g)));
            assert_eq!(show_value(gs, &got), want, "{}", gs.name(g));
            compared += 1;
        }
    }
    eprintln!("{compared} runs compared");
    assert!(compared > 500, "only {compared} runs compared");
}
