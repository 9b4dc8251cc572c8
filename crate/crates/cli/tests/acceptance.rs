//! Acceptance criteria. Every value here is an exact integer, so every
//! comparison is exact equality.
//!
//! Run with `cargo test -p action-graph-cli --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::process::Command;

use action_graph::admissibility::{catalan_z_identity, compute_z, lemma_prefilter, FailureReason, Verdict};
use action_graph::builders::{build_generic, build_rule, Rule};
use action_graph::condensed::{build_generic_condensed, condense};
use action_graph::graph::{ActionGraph, Label, VertexBudget, VertexId};
use action_graph::sequences::{catalan, fuss_catalan, sequence_prefix, super_catalan, Family, Sequence};
use action_graph::verification::{verify_axiom1, verify_axiom2, verify_axiom3, verify_family, FamilySpec};
use num_bigint::{BigInt, BigUint};

const BUDGET: VertexBudget = VertexBudget::DEFAULT;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn z_of(family: &Family, n: usize) -> action_graph::ZResult {
    compute_z(&sequence_prefix(family, n).unwrap()).unwrap()
}

/// Rule families paired with the depths they are checked at.
const FAMILIES: [(Rule, usize); 4] = [
    (Rule::Catalan, 8),
    (Rule::Fuss { k: 2 }, 6),
    (Rule::Fuss { k: 3 }, 5),
    (Rule::Super, 6),
];

fn c1_sequence_fixtures() -> Outcome {
    let cat: Vec<_> = (0..5).map(catalan).collect();
    ensure(cat == [1, 1, 2, 5, 14].map(big), || format!("catalan {cat:?}"))?;
    let fuss: Vec<_> = (0..5).map(|n| fuss_catalan(n, 2).unwrap()).collect();
    ensure(fuss == [1, 1, 3, 12, 55].map(big), || format!("fuss {fuss:?}"))?;
    let sup: Vec<_> = (0..5).map(|n| super_catalan(0, n)).collect();
    ensure(sup == [1, 2, 6, 20, 70].map(big), || format!("super {sup:?}"))
}

fn c2_recurrence_identities() -> Outcome {
    let int = |v: &BigUint| BigInt::from(v.clone());
    // Catalan: C_3 = z_3 + z_1 C_2 + z_2 C_1, C_4 = z_4 + z_1 C_3 + z_2 C_2 + z_3 C_1
    let s = sequence_prefix(&Family::Catalan, 4).unwrap();
    let z = compute_z(&s).unwrap();
    let zi = |i: usize| z.get(i).unwrap().clone();
    ensure(
        [zi(1), zi(2), zi(3), zi(4)] == [1, 1, 2, 5].map(BigInt::from),
        || format!("catalan z {:?}", z.z),
    )?;
    let c3 = zi(3) + zi(1) * int(&s.values()[2]) + zi(2) * int(&s.values()[1]);
    ensure(c3 == BigInt::from(5), || format!("C_3 = {c3}"))?;
    let c4 = zi(4) + zi(1) * int(&s.values()[3]) + zi(2) * int(&s.values()[2]) + zi(3) * int(&s.values()[1]);
    ensure(c4 == BigInt::from(14), || format!("C_4 = {c4}"))?;

    let s = sequence_prefix(&Family::Fuss { k: 2 }, 3).unwrap();
    let z = compute_z(&s).unwrap();
    ensure(z.z == [1, 2, 7].map(BigInt::from), || format!("fuss z {:?}", z.z))?;
    let c32 = &z.z[2] + &z.z[0] * int(&s.values()[2]) + &z.z[1] * int(&s.values()[1]);
    ensure(c32 == BigInt::from(12), || format!("C_3,2 = {c32}"))?;

    let s = sequence_prefix(&Family::Super { m: 0 }, 2).unwrap();
    let z = compute_z(&s).unwrap();
    ensure(z.z == [2, 2].map(BigInt::from), || format!("super z {:?}", z.z))?;
    let s02 = &z.z[1] + &z.z[0] * int(&s.values()[1]);
    ensure(s02 == BigInt::from(6), || format!("S(0,2) = {s02}"))
}

fn c3_catalan_z_identity() -> Outcome {
    ensure(catalan_z_identity(15), || "identity fails below 15".into())?;
    let z = z_of(&Family::Catalan, 15);
    for j in 1..=15 {
        let expected = BigInt::from(catalan(j as u64 - 1));
        ensure(z.get(j) == Some(&expected), || format!("z_{j} = {:?}", z.get(j)))?;
    }
    Ok(())
}

fn c4_builder_oracle_equivalence() -> Outcome {
    for (rule, n) in FAMILIES {
        let built = build_rule(rule, n, BUDGET).map_err(|e| e.to_string())?;
        let generic = build_generic(&z_of(&rule.family(), n), n, BUDGET).map_err(|e| e.to_string())?;
        for (i, (a, b)) in built.graphs.iter().zip(&generic).enumerate() {
            ensure(a.is_isomorphic(b, false), || format!("{rule} differs at n = {i}"))?;
        }
    }
    let fuss1 = build_rule(Rule::Fuss { k: 1 }, 8, BUDGET).unwrap();
    let cat = build_rule(Rule::Catalan, 8, BUDGET).unwrap();
    for (i, (a, b)) in fuss1.graphs.iter().zip(&cat.graphs).enumerate() {
        ensure(a.is_isomorphic(b, false), || format!("fuss:1 vs catalan at n = {i}"))?;
    }
    Ok(())
}

fn rebuild(g: &ActionGraph, labels: Vec<Label>, edges: Vec<(VertexId, VertexId)>) -> ActionGraph {
    ActionGraph::from_parts(g.generation(), labels, &edges).unwrap()
}

fn c5_axiom_suite() -> Outcome {
    for (rule, n) in FAMILIES {
        let report = verify_family(&FamilySpec::Rule(rule), n, BUDGET).map_err(|e| e.to_string())?;
        let wanted = ["axiom1", "axiom2", "axiom3", "root_z"];
        for name in wanted {
            ensure(report.checks.iter().any(|c| c.name == name), || format!("{rule}: no {name} checks"))?;
        }
        ensure(report.overall, || {
            format!("{rule}: {:?}", report.failures().collect::<Vec<_>>())
        })?;
    }

    let n = 4;
    let graphs = build_rule(Rule::Catalan, n, BUDGET).unwrap().graphs;
    let s = sequence_prefix(&Family::Catalan, n).unwrap();
    let g = &graphs[n];

    // deleted vertex: the last leaf goes, its parent becomes a stale leaf
    let last = g.vertex_count() as VertexId - 1;
    let parent = g.parent(last).unwrap();
    let mut mutated = graphs.clone();
    mutated[n] = rebuild(
        g,
        g.labels()[..last as usize].to_vec(),
        g.edges().filter(|&(_, c)| c != last).collect(),
    );
    let a1 = &verify_axiom1(&mutated, &s)[n];
    ensure(!a1.passed() && a1.index == n, || format!("deletion not caught by axiom 1: {a1:?}"))?;
    let a3 = verify_axiom3(&mutated[n]);
    ensure(!a3.passed() && a3.vertex == Some(parent), || format!("deletion locator: {a3:?}"))?;

    // corrupted label: a root-adjacent leaf labeled 4 relabeled 3
    let victim = g.children(g.root()).iter().copied().find(|&c| g.label(c) == 4).unwrap();
    let mut labels = g.labels().to_vec();
    labels[victim as usize] = 3;
    let mut mutated = graphs.clone();
    mutated[n] = rebuild(g, labels, g.edges().collect());
    let a1 = &verify_axiom1(&mutated, &s)[n];
    ensure(!a1.passed() && a1.vertex == Some(victim), || format!("corruption locator: {a1:?}"))?;
    let a3 = verify_axiom3(&mutated[n]);
    ensure(!a3.passed() && a3.vertex == Some(victim), || format!("corruption axiom 3: {a3:?}"))?;

    // extra leaf under a label-3 vertex
    let host = g.vertices().find(|&v| g.label(v) == 3).unwrap();
    let mut labels = g.labels().to_vec();
    labels.push(4);
    let mut edges: Vec<_> = g.edges().collect();
    edges.push((host, labels.len() as VertexId - 1));
    let mut mutated = graphs.clone();
    mutated[n] = rebuild(g, labels, edges);
    ensure(!verify_axiom1(&mutated, &s)[n].passed(), || "extra leaf passes axiom 1".into())?;
    let a2 = &verify_axiom2(&mutated)[n];
    ensure(!a2.passed() && a2.vertex == Some(host), || format!("extra leaf locator: {a2:?}"))
}

fn c6_super_integrality() -> Outcome {
    let built = build_rule(Rule::Super, 8, BUDGET).map_err(|e| format!("step_super: {e}"))?;
    let expected: Vec<u64> = (0..=8)
        .map(|n| u64::try_from(super_catalan(0, n)).unwrap())
        .collect();
    ensure(built.added == expected, || format!("added {:?}", built.added))
}

fn c7_admissibility_rejections() -> Outcome {
    let seq = |v: &[u64]| Sequence::from_u64s("custom", v).unwrap();

    let r = compute_z(&seq(&[1, 1, 1])).unwrap();
    let f = r.failure.clone().ok_or("[1,1,1] accepted")?;
    ensure(
        r.verdict == Verdict::Rejected && f.index == 2 && f.value == BigInt::from(0),
        || format!("[1,1,1]: {r:?}"),
    )?;

    let r = compute_z(&seq(&[1, 2, 3])).unwrap();
    let f = r.failure.clone().ok_or("[1,2,3] accepted")?;
    ensure(f.index == 2 && f.value == BigInt::from(-1), || format!("[1,2,3]: {r:?}"))?;

    let s = seq(&[1, 3, 8]);
    let lemma = lemma_prefilter(&s);
    ensure(
        lemma.iter().any(|c| c.name == "s2_at_least_s1_squared" && !c.passed),
        || format!("[1,3,8] lemmas {lemma:?}"),
    )?;
    let r = compute_z(&s).unwrap();
    ensure(
        r.verdict == Verdict::Rejected
            && r.failure.as_ref().map(|f| f.reason) == Some(FailureReason::S2Lemma),
        || format!("[1,3,8]: {r:?}"),
    )
}

fn c8_condensed_laws() -> Outcome {
    for (rule, n) in FAMILIES {
        for g in build_rule(rule, n, BUDGET).unwrap().graphs {
            let c = condense(&g);
            ensure(c.is_maximally_grouped(), || format!("{rule} G_{} not maximal", g.generation()))?;
            let back = c.expand(BUDGET).map_err(|e| e.to_string())?;
            ensure(back.is_isomorphic(&g, false), || format!("{rule} G_{} expand∘condense", g.generation()))?;
            ensure(
                condense(&back).canonical_form(false) == c.canonical_form(false),
                || format!("{rule} G_{} condense∘expand", g.generation()),
            )?;
        }
    }
    for family in [
        Family::Catalan,
        Family::Fuss { k: 2 },
        Family::Fuss { k: 3 },
        Family::Super { m: 0 },
    ] {
        let s = sequence_prefix(&family, 20).unwrap();
        let z = compute_z(&s).unwrap();
        for n in 0..=20 {
            let c = build_generic_condensed(&z, n).map_err(|e| e.to_string())?;
            let count = c.count_label(n as Label);
            ensure(count == s.values()[n], || format!("{family} n = {n}: {count} vs {}", s.values()[n]))?;
        }
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_actiongraph"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn c9_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [
        vec!["build", "--rule", "super", "--n", "4", "--form", "full"],
        vec!["build", "--sequence", "fuss:2", "--n", "4", "--form", "condensed"],
        vec!["build", "--rule", "catalan", "--n", "5", "--dot"],
        vec!["analyze", "--sequence", "catalan", "--n", "10", "--json"],
        vec!["verify", "--rule", "fuss:2", "--n", "4", "--json"],
        vec!["compare", "--rule", "catalan", "--n", "5", "--json"],
    ];
    for args in runs {
        let (code_a, a) = run_cli(&args);
        let (code_b, b) = run_cli(&args);
        ensure(code_a == 0 && code_b == 0, || format!("{args:?} exited {code_a}/{code_b}"))?;
        ensure(!a.is_empty() && a == b, || format!("{args:?} output differs"))?;
    }
    // file outputs, JSON and DOT side by side
    let mut files = Vec::new();
    for round in 0..2 {
        let path = dir.path().join(format!("g{round}.json"));
        let p = path.to_str().unwrap();
        let (code, _) = run_cli(&["build", "--rule", "fuss:3", "--n", "4", "--out", p, "--dot"]);
        ensure(code == 0, || format!("build exited {code}"))?;
        let json = std::fs::read(&path).map_err(|e| e.to_string())?;
        let dot = std::fs::read(path.with_extension("dot")).map_err(|e| e.to_string())?;
        files.push((json, dot));
    }
    ensure(files[0] == files[1], || "file outputs differ".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 sequence fixtures", c1_sequence_fixtures),
        ("2 recurrence identities", c2_recurrence_identities),
        ("3 catalan z identity (j <= 15)", c3_catalan_z_identity),
        ("4 builder/oracle equivalence", c4_builder_oracle_equivalence),
        ("5 axiom suite and mutations", c5_axiom_suite),
        ("6 super-rule integrality (n <= 8)", c6_super_integrality),
        ("7 admissibility rejections", c7_admissibility_rejections),
        ("8 condensed laws (n <= 20)", c8_condensed_laws),
        ("9 CLI determinism", c9_determinism),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS  criterion {name}"),
            Err(why) => {
                println!("FAIL  criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
