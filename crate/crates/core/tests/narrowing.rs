use nomrw::equational::e_equal;
use nomrw::frontend::{bundled, load_theory_str, parse_judgement_with, parse_term_with};
use nomrw::narrowing::{
    is_basic, lift_narrowing_to_rewriting, narrow_steps, project_rewriting_to_narrowing, Mode, NarrowingNode,
    NarrowingTree, TreeConfig,
};
use nomrw::rewriting::{rewrite_steps, verify_step};
use nomrw::syntax::{FreshCtx, NameSupply, Position, Subst, Term, TermInCtx, Var};

const FIXPOINT_BRANCHING: &str = "\
sig h : 1
sig f : 2
sig oplus : 2
sig g : 1
sig e : 0
comm f
comm oplus
rule hr: h(Y) -> Y
rule fr: f([a][b]Z, Z) -> f(h(Z), h(Z))
";

fn forall_var_image(t: &Term) -> bool {
    match t {
        Term::App(f, args) if f.name.as_str() == "forall" => {
            matches!(&args[0], Term::Abs(a, body) if a.to_string() == "a" && body.is_susp())
        }
        _ => false,
    }
}

#[test]
fn vacuous_forall_chain_and_basic_finiteness() {
    let loaded = bundled::load("forall2");
    let table = loaded.file.table();
    let root = TermInCtx::bare(Term::pair(
        parse_term_with("forall([a]X)", &table).unwrap(),
        parse_term_with("X", &table).unwrap(),
    ));
    let config = TreeConfig { max_depth: 3, ..TreeConfig::default() };
    let mut tree = NarrowingTree::new(&loaded.presentation, &root, config);
    let nodes: Vec<NarrowingNode> = tree.by_ref().collect();
    assert!(tree.report().depth_limited);
    let deepest = nodes.iter().find(|n| n.depth == 3).expect("depth 3 reached");
    let path = tree.derivation(deepest.id);
    assert_eq!(path.len(), 4);
    // Each step binds the variable introduced by the previous one.
    let mut var = Var::new("X");
    for node in &path[1..] {
        let theta = node.theta();
        let image = theta.get(var).expect("chain variable bound").clone();
        assert!(forall_var_image(&image), "{image}");
        let Term::App(_, args) = &image else { unreachable!() };
        let Term::Abs(_, body) = &args[0] else { unreachable!() };
        let Term::Susp(_, next) = body.as_ref() else { unreachable!() };
        var = *next;
    }
    assert!(!is_basic(&path));
    assert!(is_basic(&path[..2]));
    assert_eq!(path[1].basic_positions, [Position::root()].into_iter().collect());

    let basic = TreeConfig { max_depth: 20, basic: true, ..TreeConfig::default() };
    let mut tree = NarrowingTree::new(&loaded.presentation, &root, basic);
    let count = tree.by_ref().count();
    assert_eq!(count, 2);
    assert!(!tree.report().depth_limited);
}

#[test]
fn fixed_point_branching_levels() {
    let loaded = load_theory_str(FIXPOINT_BRANCHING).unwrap();
    let table = loaded.file.table();
    let pres = &loaded.presentation;
    let root = parse_judgement_with("h(f([b][a]X, X))", &table).unwrap();
    let config = TreeConfig { mode: Mode::Plain, max_depth: 2, fp_budget: 2, ..TreeConfig::default() };
    let mut tree = NarrowingTree::new(pres, &root, config);
    let nodes: Vec<NarrowingNode> = tree.by_ref().collect();

    let first = parse_term_with("f([b][a]X, X)", &table).unwrap();
    let level1: Vec<_> = nodes.iter().filter(|n| n.depth == 1).collect();
    let n1 = level1.iter().find(|n| n.term == first).expect("first narrowing step");
    assert_eq!(n1.step.as_ref().unwrap().rule, "hr");
    let t1 = parse_term_with("f(h(X), h(X))", &table).unwrap();
    let t2 = parse_term_with("f(h(oplus(a,b)), h(oplus(a,b)))", &table).unwrap();
    let level2: Vec<_> = nodes.iter().filter(|n| n.depth == 2 && n.parent == Some(n1.id)).collect();
    let c1 = level2.iter().find(|n| n.term == t1).expect("t1 node");
    assert_eq!(c1.context, nomrw::frontend::parse_context("a#X, b#X").unwrap());
    assert!(level2.iter().any(|n| e_equal(&pres.theory, &n.context, &n.term, &t2)));
    assert!(tree.report().budget_truncated);

    // Two-step prefix instantiated with X := g(e) replays as rewriting.
    let path = tree.derivation(c1.id);
    let rho: Subst = [(Var::new("X"), parse_term_with("g(e)", &table).unwrap())].into_iter().collect();
    let trace = lift_narrowing_to_rewriting(pres, &FreshCtx::new(), &path, &rho, Mode::Plain).unwrap();
    assert_eq!(trace.len(), 2);
    assert_eq!(trace[1].result, parse_term_with("f(h(g(e)), h(g(e)))", &table).unwrap());
    for step in &trace {
        assert!(verify_step(pres, &FreshCtx::new(), step));
    }
}

#[test]
fn single_step_lifts_with_identity() {
    let loaded = load_theory_str(FIXPOINT_BRANCHING).unwrap();
    let table = loaded.file.table();
    let pres = &loaded.presentation;
    let root = NarrowingNode::root(&parse_judgement_with("h(f([b][a]X, X))", &table).unwrap());
    let mut supply = NameSupply::above(0);
    let (children, _) = narrow_steps(pres, &root, Mode::Plain, false, 2, &mut supply);
    assert!(!children.is_empty());
    for c in children {
        let path = vec![root.clone(), c];
        let delta = path[1].context.clone();
        let trace = lift_narrowing_to_rewriting(pres, &delta, &path, &Subst::id(), Mode::Plain);
        assert_eq!(trace.map(|t| t.len()), Ok(1));
    }
    let ground = NarrowingNode::root(&TermInCtx::bare(parse_term_with("a", &table).unwrap()));
    assert!(narrow_steps(pres, &ground, Mode::Plain, false, 2, &mut supply).0.is_empty());
    assert!(lift_narrowing_to_rewriting(pres, &FreshCtx::new(), &[], &Subst::id(), Mode::Plain).unwrap().is_empty());
}

#[test]
fn prenex_step_projects() {
    let loaded = bundled::load("prenex");
    let table = loaded.file.table();
    let pres = &loaded.presentation;
    let root = parse_judgement_with("a#P |- and(P, forall([a]Q))", &table).unwrap();
    let rho: Subst = [
        (Var::new("P"), parse_term_with("not(b)", &table).unwrap()),
        (Var::new("Q"), parse_term_with("not(a)", &table).unwrap()),
    ]
    .into_iter()
    .collect();
    let delta = FreshCtx::new();
    let start = rho.apply(&root.term);
    let steps: Vec<_> = rewrite_steps(&delta, &start, pres).into_iter().filter(|s| s.position == Position::root()).collect();
    assert_eq!(steps.len(), 1);
    let proj = project_rewriting_to_narrowing(pres, &delta, &root, &rho, &steps, Mode::Plain, 2).unwrap();
    assert_eq!(proj.nodes.len(), 2);
    assert_eq!(proj.nodes[1].step.as_ref().unwrap().rule, "R1");
    let empty = project_rewriting_to_narrowing(pres, &delta, &root, &rho, &[], Mode::Plain, 2).unwrap();
    assert_eq!(empty.nodes.len(), 1);
}
