use super::*;

fn module(src: &str) -> SourceModule {
    parse_module(src, "test").unwrap()
}

#[test]
fn signature_and_clause() {
    let m = module("id : a -> a\nid x = x\n");
    assert_eq!(m.decls.len(), 2);
    assert!(matches!(&m.decls[1].kind, DeclKind::Clauses { clauses, .. } if clauses.len() == 1));
}

#[test]
fn short_data() {
    let m = module("data Nat = Z | S Nat");
    match &m.decls[0].kind {
        DeclKind::ShortData { name, cons, .. } => {
            assert_eq!(name, "Nat");
            assert_eq!(cons.len(), 2);
            assert_eq!(cons[1].1.len(), 1);
        }
        k => panic!("{k:?}"),
    }
}

#[test]
fn data_with_layout_and_operator_constructor() {
    let m = module("data Vect : Nat -> Type -> Type where\n     Nil  : Vect Z a\n     (::) : a -> Vect k a -> Vect (S k) a\n\nx : Nat\n");
    match &m.decls[0].kind {
        DeclKind::Data { cons: Some(cs), .. } => {
            assert_eq!(cs.len(), 2);
            assert_eq!(cs[1].name, "::");
        }
        k => panic!("{k:?}"),
    }
    assert_eq!(m.decls.len(), 2);
}

#[test]
fn binders_with_multiplicities() {
    let t = parse_term("(0 a : Type) -> (1 _ : a) -> {default Unrestricted use : Usage} -> a").unwrap();
    let TermKind::Pi(b, rest) = &t.kind else { panic!() };
    assert_eq!(b.mult, Some(Zero));
    let TermKind::Pi(b2, rest) = &rest.kind else { panic!() };
    assert_eq!((b2.mult, b2.name.clone()), (Some(One), None));
    let TermKind::Pi(b3, _) = &rest.kind else { panic!() };
    assert!(matches!(b3.plicity, Plicity::Default(_)));
}

#[test]
fn auto_implicit_arrow() {
    let t = parse_term("HasCard st => (1 _ : ATM st) -> L {use=1} (ATM Ready)").unwrap();
    let TermKind::Pi(b, _) = &t.kind else { panic!() };
    assert_eq!(b.plicity, Plicity::Auto);
}

#[test]
fn operator_precedence() {
    let t = parse_term("a >>= \\x => x :: y ++ z").unwrap();
    let (head, args) = t.spine();
    assert_eq!(head.kind, TermKind::Var(">>=".into()));
    assert_eq!(args.len(), 2);
    let t = parse_term("x + 1 :: xs").unwrap();
    assert_eq!(t.spine().0.kind, TermKind::Var("::".into()));
}

#[test]
fn do_block_with_pattern_bind_and_case() {
    let src = "runATM : L ()\nrunATM = do m <- initATM\n            ok # m <- checkPIN m 1234\n            case ok of\n                 CorrectPIN => do m <- dispense m\n                                  shutDown m\n                 IncorrectPIN => shutDown m\n";
    let m = module(src);
    let DeclKind::Clauses { clauses, .. } = &m.decls[1].kind else { panic!() };
    let TermKind::Do(stmts) = &clauses[0].rhs.kind else { panic!() };
    assert_eq!(stmts.len(), 3);
    assert!(matches!(&stmts[1], Stmt::Bind(Pattern { kind: PatternKind::Con(c, _), .. }, _) if c == "#"));
    let Stmt::Expr(Term { kind: TermKind::Case(_, alts), .. }) = &stmts[2] else { panic!() };
    assert_eq!(alts.len(), 2);
}

#[test]
fn multi_line_let() {
    let src = "io_bind (MkIO fn) = \\k => MkIO (\\w => let MkIORes x' w' = fn w\n                                          MkIO res = k x' in res w')\n";
    let m = module(src);
    let DeclKind::Clauses { clauses, .. } = &m.decls[0].kind else { panic!() };
    let TermKind::Lam(_, body) = &clauses[0].rhs.kind else { panic!() };
    let (_, args) = body.spine();
    let Arg::Explicit(Term { kind: TermKind::Lam(_, inner), .. }) = args[0] else { panic!() };
    assert!(matches!(&inner.kind, TermKind::Let(bs, _) if bs.len() == 2));
}

#[test]
fn clause_groups_merge() {
    let m = module("rep : Nat -> a -> List a\nrep Z x = []\nrep (S k) x = x :: rep k x\n");
    assert_eq!(m.decls.len(), 2);
    let DeclKind::Clauses { clauses, .. } = &m.decls[1].kind else { panic!() };
    assert_eq!(clauses[1].pats[0].kind, PatternKind::Con("S".into(), vec![Pattern::new(PatternKind::Var("k".into()), Span::default())]));
}

#[test]
fn repl_commands() {
    assert_eq!(parse_repl_input(":q").unwrap(), ReplCommand::Quit);
    assert!(matches!(parse_repl_input(":t length").unwrap(), ReplCommand::TypeOf(Term { kind: TermKind::Var(n), .. }) if n == "length"));
    assert!(matches!(parse_repl_input("printf (Num End) 3").unwrap(), ReplCommand::Eval(_)));
    assert_eq!(parse_repl_input(":holes").unwrap(), ReplCommand::Holes);
}

#[test]
fn syntax_error_has_location() {
    let e = parse_module("f : Nat\nf = (1", "t").unwrap_err();
    assert_eq!(e.kind, ErrorKind::SyntaxError);
    assert_eq!(e.span.line, 2);
}

#[test]
fn named_implicit_arguments() {
    let t = parse_term("RunLength {ty} xs").unwrap();
    let (_, args) = t.spine();
    assert!(matches!(args[0], Arg::Named(n, _) if n == "ty"));
}

#[test]
fn round_trip_examples() {
    let src = "f : (1 x : a) -> {auto p : T} -> (a, a)\nf x = case x of\n        A => do y <- g\n                let z = y\n                pure z\n        _ => let Val ys = h in \\(a # b) => [1, 2] ++ \"s\\n\"\n";
    let m = module(src);
    let printed = print_module(&m);
    let again = parse_module(&printed, "test").unwrap();
    assert_eq!(m.decls, again.decls, "{printed}");
}
