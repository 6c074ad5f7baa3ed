use std::time::Instant;

use nomrw::alpha::entails;
use nomrw::alpha::Obligation;
use nomrw::equational::e_equal;
use nomrw::frontend::{bundled, parse_context, parse_judgement_with, parse_term_with};
use nomrw::syntax::{Atom, FreshCtx, Subst, Var};
use nomrw::unify::{t_unify, verify_solution, TUnifConfig, TUnifProblem, Verdict, DEFAULT_FUEL};

#[test]
fn differentiation_solution() {
    let loaded = bundled::load("diff");
    let table = loaded.file.table();
    let pres = &loaded.presentation;
    let left = parse_judgement_with("y#G |- lam([z]diff(lam([y]plus(sin(F), G)), z))", &table).unwrap();
    let right = parse_judgement_with("lam([z]cos(z))", &table).unwrap();
    let problem = TUnifProblem::new(left, right);
    let config = TUnifConfig { max_depth: 8, fp_budget: 1, ..TUnifConfig::default() };
    let start = Instant::now();
    let y = parse_term_with("y", &table).unwrap();
    let mut it = t_unify(pres, &problem, config);
    let found = it
        .by_ref()
        .find(|s| {
            s.subst.get(Var::new("F")).is_some_and(|t| e_equal(&pres.theory, &s.context, t, &y))
                && entails(&s.context, &[Obligation::Primitive(Atom::new("y"), Var::new("G"))])
        })
        .expect("solution with F := y");
    eprintln!("differentiation: {:?}, {} nodes, solution {} / {}", start.elapsed(), it.nodes_seen(), found.context, found.subst);
    assert_eq!(verify_solution(pres, &problem, &found.context, &found.subst, DEFAULT_FUEL), Verdict::Valid);
    assert_eq!(found.context, parse_context("y#G").unwrap());
    assert_eq!(found.subst.len(), 1);
}

#[test]
fn termination_witness() {
    let loaded = bundled::load("forall2");
    let table = loaded.file.table();
    let problem = TUnifProblem::new(
        parse_judgement_with("forall([a]X)", &table).unwrap(),
        parse_judgement_with("X", &table).unwrap(),
    );
    let basic = TUnifConfig { max_depth: 50, basic: true, ..TUnifConfig::default() };
    let mut it = t_unify(&loaded.presentation, &problem, basic);
    assert!(it.next().is_none());
    assert!(!it.report().depth_limited);
    let plain = TUnifConfig { max_depth: 6, ..TUnifConfig::default() };
    let mut it = t_unify(&loaded.presentation, &problem, plain);
    assert!(it.next().is_none());
    assert!(it.report().depth_limited);
}

#[test]
fn commutative_solution_verifies_without_rules() {
    let text = "sig fc : 2\nsig oplus : 2\ncomm fc\ncomm oplus\n";
    let loaded = nomrw::frontend::load_theory_str(text).unwrap();
    let table = loaded.file.table();
    let problem = TUnifProblem::new(
        parse_judgement_with("fc([a][b]Z, Z)", &table).unwrap(),
        parse_judgement_with("fc([b][a]X, X)", &table).unwrap(),
    );
    let ctx = parse_context("a#X, b#X").unwrap();
    let sigma: Subst = [(Var::new("Z"), parse_term_with("X", &table).unwrap())].into_iter().collect();
    let pres = &loaded.presentation;
    assert_eq!(verify_solution(pres, &problem, &ctx, &sigma, DEFAULT_FUEL), Verdict::Valid);
    assert_eq!(verify_solution(pres, &problem, &FreshCtx::new(), &sigma, DEFAULT_FUEL), Verdict::Invalid);
    let config = TUnifConfig { max_depth: 0, fp_budget: 2, ..TUnifConfig::default() };
    let sols: Vec<_> = t_unify(pres, &problem, config).collect();
    assert!(sols.iter().any(|s| s.context == ctx && s.subst == sigma));
    for s in &sols {
        assert_eq!(verify_solution(pres, &problem, &s.context, &s.subst, DEFAULT_FUEL), Verdict::Valid);
    }
}
