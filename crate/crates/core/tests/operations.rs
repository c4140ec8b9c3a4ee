//! Worked examples for each public operation, run through the library API.

use std::collections::BTreeSet;

use provkit::coding::{decode, diagonalize, encode, numeral_of, replay_trace, sub_code, Syntax};
use provkit::corpus::{Corpus, Script};
use provkit::gl::{brute_force, check_model, decide_gl, parse_modal, BruteResult, GlVerdict, KripkeModel};
use provkit::kernel::{
    apply_glt, check_script, num_eval, parse_script, taut_valid, KernelError, ProofStep, Rule, Signature, TautOutcome,
};
use provkit::meta::{list_rules, MetaAssumption};
use provkit::syntax::{alpha_eq, is_sigma1, parse_formula, parse_term, Formula, Term};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn kernel(name: &str) -> provkit::kernel::ProofScript {
    match &Corpus::bundled().get(name).unwrap().parsed {
        Ok(Script::Kernel(s)) => s.clone(),
        other => panic!("{name}: {other:?}"),
    }
}

#[test]
fn parsing_and_printing() {
    assert_eq!(f("0 = 0"), Formula::Eq(Term::Zero, Term::Zero));
    let yj = f("all x. (k < x) -> Prov[ ~Y(x) ; x := x ]");
    let Formula::ForAll(_, body) = &yj else { panic!() };
    let Formula::Imp(_, boxed) = &**body else { panic!() };
    let Formula::Box(_, subst) = &**boxed else { panic!() };
    assert_eq!(subst, &vec![("x".to_string(), Term::var("x"))]);
    assert!(parse_formula("Prov[ p(x) ; y := 0 ]").is_err());
    assert_eq!(f("x > k"), f("k < x"));
    assert_eq!(Formula::Eq(Term::Zero, Term::Zero).to_string(), "0 = 0");
    assert_eq!(numeral_of(3).to_string(), "3");
    assert_eq!(parse_term("3").unwrap(), numeral_of(3));
    let yg = f("all x. k < x -> ~Prov[ YG(x) ; x := x ]");
    assert_eq!(yg.to_string(), "all x. k < x -> ~Prov[ YG(x) ; x := x ]");
}

#[test]
fn free_variables_and_substitution() {
    let yj = f("all x. k < x -> Prov[ ~YJ(x) ; x := x ]");
    assert_eq!(yj.free_vars(), BTreeSet::from(["k".to_string()]));
    assert!(f("all x. x = x").free_vars().is_empty());
    assert_eq!(f("Prov[ Y(x) ; x := k + 1 ]").free_vars(), BTreeSet::from(["k".to_string()]));

    assert_eq!(f("YJ(k)").substitute("k", &numeral_of(0)), f("YJ(0)"));
    let kp1 = parse_term("k + 1").unwrap();
    assert_eq!(f("Prov[ ~Y(x) ; x := x ]").substitute("x", &kp1), f("Prov[ ~Y(x) ; x := k + 1 ]"));
    let shadowed = f("all x. x = y");
    assert_eq!(shadowed.substitute("x", &Term::Zero), shadowed);

    assert!(alpha_eq(&f("all x. x = x"), &f("all y. y = y")));
    assert!(!alpha_eq(&f("all x. x = k"), &f("all y. y = j")));
    let thm = kernel("thm2_con_iff_YG");
    let reparsed = parse_script(&thm.to_string()).unwrap();
    for (a, b) in thm.steps.iter().zip(&reparsed.steps) {
        assert!(alpha_eq(&a.formula, &b.formula));
    }
}

#[test]
fn sigma1_classification() {
    assert!(is_sigma1(&f("k < x")));
    assert!(is_sigma1(&f("Prov[ YG(x) ; x := x + 1 ]")));
    assert!(!is_sigma1(&f("all x. k < x")));
    assert!(is_sigma1(&f("all x. x < k -> x = x")));
    assert!(is_sigma1(&f("exists x. k < x & Prov[ YG(w) ; w := x ]")));
}

#[test]
fn coding_examples() {
    assert_ne!(encode(&Syntax::Formula(f("0 = 0"))), encode(&Syntax::Formula(f("0 = S(0)"))));
    let body = f("all x. k < x -> ~Prov[ YG(x) ; x := x ]");
    assert_eq!(decode(&encode(&Syntax::Formula(body.clone()))).unwrap(), Syntax::Formula(body));
    assert!(decode(&"0".parse().unwrap()).is_err());
    assert_eq!(numeral_of(0), Term::Zero);
    assert_eq!(numeral_of(3), parse_term("S(S(S(0)))").unwrap());
    let codes: Vec<_> = (0..=64).map(|n| encode(&Syntax::Term(numeral_of(n))).0).collect();
    assert!(codes.windows(2).all(|w| w[0] < w[1]));

    let x0 = encode(&Syntax::Formula(f("x = 0")));
    assert_eq!(sub_code(&x0, "x", 0).unwrap(), encode(&Syntax::Formula(f("0 = 0"))));
    let closed = encode(&Syntax::Formula(f("all x. x = 0")));
    assert_eq!(sub_code(&closed, "x", 7).unwrap(), closed);

    let yh = f("all x. k < x -> Prov[ self(x) ; x := x ]");
    let d = diagonalize(&yh, "self", &["k".into()]).unwrap();
    let expected = provkit::syntax::Formula::iff(
        d.fixed_point.clone(),
        yh.rename_pred("self", match &d.fixed_point {
            Formula::Pred(n, _) => n,
            _ => panic!(),
        }),
    );
    assert!(alpha_eq(&d.defining_biconditional, &expected));
    assert_eq!(replay_trace(&d.witness_trace).unwrap(), encode(&Syntax::Formula(d.fixed_point.clone())));
    let plain = f("0 = 0");
    let d = diagonalize(&plain, "self", &[]).unwrap();
    assert_eq!(d.fixed_point, plain);
    assert!(diagonalize(&f("all x. k < x -> self(x)"), "self", &["k".into()]).is_err());
}

#[test]
fn kernel_rule_examples() {
    let one = |vars: &str, line: &str| {
        let src = format!("theorem t \"\"\nvar {vars}\n1. {line}\nconclusion {}\n", line.rsplit_once(" by ").unwrap().0);
        check_script(&parse_script(&src).unwrap(), &Signature::standard())
    };
    assert!(one("k, x", "k < x -> Prov[ k < x ; k := k, x := x ] by gd3").accepted());
    assert!(one("a, b", "Prov[ a < b -> b < a ; a := a, b := b ] -> (Prov[ a < b ; a := a, b := b ] -> Prov[ b < a ; a := a, b := b ]) by gd2").accepted());
    let r = one("k", "(all x. k < x) -> Prov[ all x. k < x ; k := k ] by gd3");
    assert_eq!(r.failure.map(|f| f.step), Some(1));

    assert!(taut_valid(&f("P -> P")).unwrap().is_valid());
    assert!(taut_valid(&f("(P -> Q) -> (~Q -> ~P)")).unwrap().is_valid());
    assert!(matches!(taut_valid(&f("P -> Q")).unwrap(), TautOutcome::Invalid(cv) if !cv.is_empty()));

    assert!(num_eval(&f("3 < 5")).unwrap());
    assert!(num_eval(&f("S(0) + S(0) = 2")).unwrap());
    assert!(!num_eval(&f("2 < 2")).unwrap());
    assert!(matches!(num_eval(&f("x < 2")), Err(KernelError::NotClosedAtomic(_))));

    let mut sig = Signature::standard();
    let ax = sig.fix_intro("YJ", &f("all x. k < x -> Prov[ ~self(x) ; x := x ]"), "self", &["k".into()]).unwrap();
    assert!(alpha_eq(&ax, &f("YJ(k) <-> all x. k < x -> Prov[ ~YJ(x) ; x := x ]")));
    assert_eq!(sig.axiom("Con").unwrap(), f("Con <-> ~Prov[ bot ; ]"));
    assert!(sig.fix_intro("Bad", &f("all x. k < x -> self(x)"), "self", &["k".into()]).is_err());
}

#[test]
fn generalized_loeb_examples() {
    let full = kernel("thm1_3_YH");
    let mut sub = full.clone();
    sub.steps.truncate(33);
    sub.conclusion = f("Prov[ YH(k) ; k := k ] -> YH(k)");
    let closed = apply_glt(&sub).unwrap();
    assert!(alpha_eq(&closed.conclusion, &f("YH(k)")));
    assert!(check_script(&closed, &Signature::standard()).accepted());

    let trivial = parse_script("theorem z \"\"\n1. 0 = 0 by numeval\n2. Prov[ 0 = 0 ; ] -> 0 = 0 by taut [1]\nconclusion Prov[ 0 = 0 ; ] -> 0 = 0\n").unwrap();
    assert_eq!(apply_glt(&trivial).unwrap().conclusion, f("0 = 0"));
    let wrong = parse_script("theorem z \"\"\n1. 0 = 0 by numeval\nconclusion 0 = 0\n").unwrap();
    assert!(matches!(apply_glt(&wrong), Err(KernelError::Shape(_))));
}

/// Necessitating any step that sits inside an open block must fail.
#[test]
fn gd1_inside_blocks_is_rejected() {
    let mut cases = 0;
    for e in Corpus::bundled().entries() {
        let Ok(Script::Kernel(s)) = &e.parsed else { continue };
        for (i, step) in s.steps.iter().enumerate() {
            if step.depth == 0 {
                continue;
            }
            let mut m = s.clone();
            m.steps.truncate(i + 1);
            let index = step.index + 1000;
            m.steps.push(ProofStep {
                index,
                formula: Formula::boxed_identity(step.formula.clone()),
                rule: Rule::Gd1,
                premises: vec![step.index],
                params: vec![],
                depth: step.depth,
                line: 0,
            });
            let r = check_script(&m, &Signature::standard());
            let fail = r.failure.expect("gd1 under an assumption must be rejected");
            assert_eq!(fail.step, index, "{}: {}", s.name, fail.reason);
            cases += 1;
        }
    }
    assert!(cases > 100, "{cases}");
}

#[test]
fn checking_is_deterministic_and_idempotent() {
    let c = Corpus::bundled();
    let a = c.prove_all();
    let b = c.prove_all();
    assert_eq!(a.to_string(), b.to_string());
    let reports = |r: &provkit::corpus::ProveAllReport| r.rows.iter().map(|r| r.report.clone()).collect::<Vec<_>>();
    assert_eq!(reports(&a), reports(&b));
}

#[test]
fn meta_conclusions_are_general_in_k() {
    let c = Corpus::bundled();
    for name in ["thm1_1a", "thm1_1b", "thm1_2a", "thm1_2b"] {
        let Ok(Script::Meta(m)) = &c.get(name).unwrap().parsed else { panic!() };
        assert_eq!(m.eigen, vec!["k".to_string()], "{name}");
        assert_eq!(m.conclusion.formula().unwrap().free_vars(), BTreeSet::from(["k".to_string()]));
    }
    let rules = list_rules();
    assert_eq!(rules.len(), 8);
    assert!(rules.iter().any(|r| r.name == "m-g2" && r.gate == Some(MetaAssumption::Con)));
    assert!(rules.iter().any(|r| r.name == "m-refl1" && r.gate == Some(MetaAssumption::OneCon)));
}

#[test]
fn thm1_1a_without_one_con_fails_at_reflection() {
    let c = Corpus::bundled();
    let lib = c.library();
    let Ok(Script::Meta(m)) = &c.get("thm1_1a").unwrap().parsed else { panic!() };
    let mut weak = m.clone();
    weak.assumptions.clear();
    let r = provkit::meta::check_meta_script(&weak, &lib);
    let refl = m.steps.iter().find(|s| s.rule == provkit::meta::MetaRule::Refl1).unwrap().index;
    assert_eq!(r.failure.unwrap().step, refl);
}

#[test]
fn gl_examples() {
    let valid = |s: &str| decide_gl(&parse_modal(s).unwrap()).unwrap().is_valid();
    assert!(valid("[]([]p -> p) -> []p"));
    assert!(valid("~[]bot -> ~[]~[]bot"));
    let GlVerdict::Invalid(cm) = decide_gl(&parse_modal("[]p -> p").unwrap()).unwrap() else { panic!() };
    assert_eq!(cm.model.worlds, 1);
    assert!(!cm.model.holds_atom(cm.world, "p"));

    let terminal = KripkeModel::new(2, BTreeSet::from([(0, 1)]), Default::default(), BTreeSet::from(["p".to_string()])).unwrap();
    assert!(check_model(&terminal, 1, &parse_modal("[]bot").unwrap()).unwrap());
    assert!(!check_model(&terminal, 0, &parse_modal("[]bot").unwrap()).unwrap());
    assert!(!check_model(&terminal, 0, &parse_modal("p").unwrap()).unwrap());
    assert!(check_model(&terminal, 5, &parse_modal("p").unwrap()).is_err());
    assert!(KripkeModel::new(2, BTreeSet::from([(0, 0)]), Default::default(), BTreeSet::new()).is_err());
    assert!(KripkeModel::new(3, BTreeSet::from([(0, 1), (1, 2)]), Default::default(), BTreeSet::new()).is_err());

    assert!(matches!(brute_force(&parse_modal("[]p -> p").unwrap(), 1), BruteResult::Invalid(_)));
    assert_eq!(brute_force(&parse_modal("[]([]p -> p) -> []p").unwrap(), 4), BruteResult::NoModelFound);
    assert!(matches!(brute_force(&parse_modal("p").unwrap(), 1), BruteResult::Invalid(_)));
}
