//! Compiled case trees against first-matching-clause semantics.

use super::{corpus_functions, Gen};
use qtt_core::core::DefKind;
use qtt_core::patterns::match_clauses;
use qtt_core::session::Session;

pub struct Stats {
    pub functions: usize,
    pub compared: usize,
    pub reduced: usize,
}

/// Runs every corpus function on constructor-ground inputs up to depth 3
/// both ways. Returns the first disagreement as an error.
pub fn compare(s: &Session) -> Result<Stats, String> {
    let gen = Gen::new(s);
    let gs = &s.elab.globals;
    let mut st = Stats { functions: 0, compared: 0, reduced: 0 };
    for (g, arity) in corpus_functions(gs) {
        let DefKind::Fun { tree, clauses, .. } = &gs.get(g).kind else { unreachable!() };
        let tuples = gen.arg_tuples(g, arity, 3, 400);
        if !tuples.is_empty() {
            st.functions += 1;
        }
        for (args, _) in tuples {
            let by_tree = gen.ev.eval_tree(tree, args.clone()).map(|v| gen.ev.normalize(arity, &v));
            let by_clauses = match_clauses(&gen.ev, clauses, &args).map(|v| gen.ev.normalize(arity, &v));
            if by_tree != by_clauses {
                let shown: Vec<_> = args.iter().map(|a| gen.ev.normalize(arity, a)).collect();
                return Err(format!("{} disagrees on {shown:?}", gs.name(g)));
            }
            st.compared += 1;
            st.reduced += usize::from(by_tree.is_some());
        }
    }
    Ok(st)
}
