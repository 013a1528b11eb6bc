//! End-to-end pipeline tests: CLI behaviour through the compiled binary,
//! library-level invariants on randomized instances, and property-based
//! round trips for every text format.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::process::{Command, Stdio};

use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

use qbffpt::cgis::build_cgis;
use qbffpt::expansion::{expand_all, Expansion};
use qbffpt::forge::{
    is_to_multipartite, multipartite_brute_force_is, multipartite_is_to_qbf, random_qdcnf,
    MultipartiteGraph, PrefixShape, SimpleGraph,
};
use qbffpt::formula::{QbfInstance, Quantifier};
use qbffpt::io::{
    dump_cgis, dump_multipartite, dump_qcsp, dump_taut, parse_cgis, parse_multipartite,
    parse_qcsp, parse_qdimacs, parse_taut, serialize_qdimacs,
};
use qbffpt::kernel::{kernelize, KernelMode};
use qbffpt::qcsp::{qcsp_oracle, qcsp_to_qbf, Constraint, QcspInstance, QcspVar};
use qbffpt::search::{
    cgis_brute_force, check_witness, oracle_eval, solve, Method, SolveOptions,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qbffpt"))
}

fn run_with_stdin(args: &[&str], input: &str) -> (i32, String, String) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qbffpt");
    child
        .stdin
        .as_mut()
        .expect("stdin handle")
        .write_all(input.as_bytes())
        .expect("write stdin");
    let out = child.wait_with_output().expect("wait for qbffpt");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

const TRUE_INSTANCE: &str = "p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n";
const FALSE_INSTANCE: &str = "p cnf 2 2\na 1 0\ne 2 0\n2 0\n-1 -2 0\n";

#[test]
fn cli_solve_true_exits_10() {
    let (code, stdout, _) = run_with_stdin(&["solve"], TRUE_INSTANCE);
    assert_eq!(code, 10);
    assert!(stdout.lines().any(|l| l == "TRUE"), "stdout: {stdout}");
}

#[test]
fn cli_solve_false_exits_20_with_witness() {
    let (code, stdout, _) = run_with_stdin(&["solve", "--method", "fpt"], FALSE_INSTANCE);
    assert_eq!(code, 20);
    assert!(stdout.lines().any(|l| l == "FALSE"), "stdout: {stdout}");
    let v = stdout
        .lines()
        .find(|l| l.starts_with("v "))
        .expect("witness line");
    assert!(v.ends_with(" 0"));
    // The countermodel must set the universal x1 true: x2 is forced true by
    // the unit clause, so -1 -2 falsifies only under x1 = 1.
    assert!(v.contains('1') && !v.contains("-1"));
}

#[test]
fn cli_methods_agree() {
    for method in ["oracle", "xp", "fpt", "auto"] {
        let (code, _, _) = run_with_stdin(&["solve", "--method", method], TRUE_INSTANCE);
        assert_eq!(code, 10, "method {method}");
        let (code, _, _) = run_with_stdin(&["solve", "--method", method], FALSE_INSTANCE);
        assert_eq!(code, 20, "method {method}");
    }
}

#[test]
fn cli_kv_output_is_deterministic() {
    let args = ["solve", "--method", "fpt", "--format", "kv"];
    let first = run_with_stdin(&args, TRUE_INSTANCE);
    let second = run_with_stdin(&args, TRUE_INSTANCE);
    assert_eq!(first, second);
    assert!(
        first.1.lines().all(|l| !l.contains("_ms=")),
        "kv output must not carry timings: {}",
        first.1
    );
    for key in ["c method=", "c n=", "c k=", "c d=", "c clauses=", "c parts="] {
        assert!(first.1.lines().any(|l| l.starts_with(key)), "missing {key}");
    }
}

#[test]
fn cli_generate_then_solve_round_trips() {
    let out = bin()
        .args(["generate", "-n", "5", "-k", "2", "-d", "3", "-m", "12", "--seed", "7"])
        .output()
        .expect("generate");
    assert!(out.status.success());
    let qdimacs = String::from_utf8(out.stdout).unwrap();
    let (inst, warnings) = parse_qdimacs(&qdimacs).expect("generated output parses");
    assert!(warnings.is_empty());
    assert_eq!(inst.matrix().len(), 12);

    let expected = if oracle_eval(&inst) { 10 } else { 20 };
    let (code, _, _) = run_with_stdin(&["solve", "--method", "fpt"], &qdimacs);
    assert_eq!(code, expected);
}

#[test]
fn cli_reduce_kernel_pipe() {
    let (code, cgis_text, _) = run_with_stdin(&["reduce"], TRUE_INSTANCE);
    assert_eq!(code, 0);
    assert!(cgis_text.starts_with("format cgis 1\n"));
    let (code, kernel_out, _) = run_with_stdin(&["kernel", "-"], &cgis_text);
    assert_eq!(code, 0);
    assert!(kernel_out.contains("c kernel_bound="));
    let dump_start = kernel_out.find("format cgis 1").expect("dump after stats");
    let reduced = parse_cgis(&kernel_out[dump_start..]).expect("kernel output parses");
    let original = parse_cgis(&cgis_text).expect("reduce output parses");
    assert_eq!(reduced.num_parts(), original.num_parts());
}

#[test]
fn cli_expand_decided_instance() {
    // Pruning removes both branch formulas: one is constant true, the other
    // contains an empty clause after substitution.
    let (code, stdout, _) = run_with_stdin(&["expand"], "p cnf 1 1\ne 1 0\n1 0\n");
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "DECIDED TRUE");
}

#[test]
fn cli_budget_exceeded_reports_undecided() {
    let (code, stdout, stderr) = run_with_stdin(
        &["solve", "--method", "fpt", "--budget-parts", "2"],
        "p cnf 3 2\na 1 0\ne 2 0\ne 3 0\n1 2 3 0\n-1 -2 -3 0\n",
    );
    assert_eq!(code, 1);
    assert!(stdout.lines().any(|l| l.starts_with("UNDECIDED budget=")), "{stdout}");
    assert!(stderr.contains("budget"), "{stderr}");
}

#[test]
fn cli_compile_qcsp_then_solve() {
    // forall x in {a,b} exists y in {a,b} with x = y: true.
    let qcsp = "qcsp 2\nvar x a a b\nvar y e a b\nrel 2 x y\na a\nb b\nend\n";
    let (code, qdimacs, _) = run_with_stdin(&["compile-qcsp"], qcsp);
    assert_eq!(code, 0);
    let (code, _, _) = run_with_stdin(&["solve"], &qdimacs);
    assert_eq!(code, 10);
}

#[test]
fn cli_hardness_generation_matches_graph_answer() {
    let graph_text = "part 1: 1 2\npart 2: 3 4\nedge 1 3\nedge 2 4\n";
    let graph = parse_multipartite(graph_text).unwrap();
    let has_is = multipartite_brute_force_is(&graph).is_some();

    let dir = std::env::temp_dir().join(format!("qbffpt-hardness-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("graph.txt");
    std::fs::write(&path, graph_text).unwrap();
    let out = bin()
        .args(["generate", "--hardness-from"])
        .arg(&path)
        .output()
        .expect("generate hardness");
    std::fs::remove_dir_all(&dir).ok();
    assert!(out.status.success());
    let qdimacs = String::from_utf8(out.stdout).unwrap();
    let (inst, _) = parse_qdimacs(&qdimacs).unwrap();
    // The compiled formula is false exactly when the graph has a
    // one-per-part independent set.
    assert_eq!(oracle_eval(&inst), !has_is);
}

#[test]
fn solver_witnesses_verify_on_random_instances() {
    let mut checked = 0;
    for seed in 0..200 {
        let inst = random_qdcnf(4, 2, 3, 6, PrefixShape::Ae, seed).unwrap();
        let verdict = solve(&inst, Method::Fpt, &SolveOptions::default()).unwrap();
        assert_eq!(verdict.answer, oracle_eval(&inst), "seed {seed}");
        if let Some(witness) = &verdict.witness {
            assert!(check_witness(&inst, witness), "seed {seed}");
            checked += 1;
        } else {
            assert!(verdict.answer, "false verdicts on AE prefixes carry witnesses");
        }
    }
    assert!(checked > 0, "no false instance in the sweep");
}

#[test]
fn expansion_invariants_on_random_instances() {
    for seed in 0..100 {
        let inst = random_qdcnf(3, 3, 2, 5, PrefixShape::Alternating, seed).unwrap();
        let taut = match expand_all(&inst, true) {
            Expansion::Decided(answer) => {
                assert_eq!(answer, oracle_eval(&inst), "seed {seed}");
                continue;
            }
            Expansion::Open(t) => t,
        };
        assert!(taut.formulas().len() <= 1 << inst.k());
        for bits in taut.provenance() {
            assert_eq!(bits.len(), inst.k());
        }
        let g = build_cgis(&taut);
        assert_eq!(g.num_parts(), taut.formulas().len());
        assert!(g.d() >= taut.width());
        for part in g.parts() {
            for label in part {
                assert_eq!(label.len(), g.d());
            }
        }
        let pads: BTreeSet<_> = g.pads().iter().copied().collect();
        assert!(pads.is_disjoint(taut.universe()));

        // Kernelization must not change the one-per-part IS answer.
        for mode in [KernelMode::Safe, KernelMode::Paper] {
            let (reduced, _) = kernelize(&g, mode);
            assert_eq!(
                cgis_brute_force(&g).is_some(),
                cgis_brute_force(&reduced).is_some(),
                "seed {seed} mode {mode:?}"
            );
        }
    }
}

fn small_qbf() -> impl Strategy<Value = QbfInstance> {
    (0usize..=3, 0usize..=3, 1usize..=3, 0usize..=6, any::<u64>()).prop_filter_map(
        "feasible clause demand",
        |(n, k, d, m, seed)| random_qdcnf(n, k, d, m, PrefixShape::Random, seed).ok(),
    )
}

fn small_qcsp() -> impl Strategy<Value = QcspInstance> {
    let domains = vec(1usize..=4, 1..=3);
    (domains, any::<u64>()).prop_map(|(sizes, seed)| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let names = ["a", "b", "c", "d"];
        let vars: Vec<QcspVar> = sizes
            .iter()
            .enumerate()
            .map(|(i, &size)| QcspVar {
                name: format!("v{i}"),
                quant: if rng.gen_bool(0.5) {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                },
                domain: names[..size].iter().map(|s| s.to_string()).collect(),
            })
            .collect();
        let mut constraints = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let mut scope: Vec<usize> = (0..vars.len()).collect();
            for i in (1..scope.len()).rev() {
                scope.swap(i, rng.gen_range(0..=i));
            }
            scope.truncate(rng.gen_range(1..=vars.len()));
            let mut tuples = BTreeSet::new();
            for _ in 0..rng.gen_range(0..=4) {
                tuples.insert(
                    scope
                        .iter()
                        .map(|&vi| rng.gen_range(0..vars[vi].domain.len()))
                        .collect::<Vec<usize>>(),
                );
            }
            constraints.push(Constraint { scope, tuples });
        }
        QcspInstance::new(vars, constraints).expect("generated instance is valid")
    })
}

fn multipartite() -> impl Strategy<Value = MultipartiteGraph> {
    (1usize..=3, any::<u64>()).prop_map(|(k, seed)| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut parts: Vec<Vec<u32>> = Vec::new();
        let mut next = 1u32;
        for _ in 0..k {
            let size = rng.gen_range(1..=3);
            parts.push((next..next + size).collect());
            next += size;
        }
        let mut edges = Vec::new();
        for (i, pi) in parts.iter().enumerate() {
            for pj in &parts[i + 1..] {
                for &u in pi {
                    for &v in pj {
                        if rng.gen_bool(0.3) {
                            edges.push((u, v));
                        }
                    }
                }
            }
        }
        MultipartiteGraph::new(parts, edges).expect("cross-part edges only")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn qdimacs_round_trip(inst in small_qbf()) {
        let (back, warnings) = parse_qdimacs(&serialize_qdimacs(&inst)).unwrap();
        prop_assert!(warnings.is_empty());
        prop_assert_eq!(inst, back);
    }

    #[test]
    fn taut_dump_round_trip(inst in small_qbf()) {
        let taut = match expand_all(&inst, true) {
            Expansion::Decided(_) => return Ok(()),
            Expansion::Open(t) => t,
        };
        let back = parse_taut(&dump_taut(&taut)).unwrap();
        prop_assert_eq!(taut.universe(), back.universe());
        prop_assert_eq!(taut.formulas(), back.formulas());
        prop_assert_eq!(taut.provenance(), back.provenance());
        for v in taut.universe() {
            prop_assert_eq!(taut.origin().get(v), back.origin().get(v));
        }
    }

    #[test]
    fn cgis_dump_round_trip(inst in small_qbf()) {
        let taut = match expand_all(&inst, true) {
            Expansion::Decided(_) => return Ok(()),
            Expansion::Open(t) => t,
        };
        let g = build_cgis(&taut);
        let back = parse_cgis(&dump_cgis(&g)).unwrap();
        prop_assert_eq!(g, back);
    }

    #[test]
    fn qcsp_text_round_trip(inst in small_qcsp()) {
        let back = parse_qcsp(&dump_qcsp(&inst)).unwrap();
        prop_assert_eq!(inst, back);
    }

    #[test]
    fn qcsp_compilation_matches_oracle(inst in small_qcsp()) {
        prop_assert_eq!(
            qcsp_oracle(&inst).unwrap(),
            oracle_eval(&qcsp_to_qbf(&inst))
        );
    }

    #[test]
    fn multipartite_dump_round_trip(g in multipartite()) {
        let back = parse_multipartite(&dump_multipartite(&g)).unwrap();
        prop_assert_eq!(g, back);
    }

    #[test]
    fn lift_preserves_independent_sets(
        n in 1u32..=5,
        edge_bits in btree_set((0u32..5, 0u32..5), 0..=6),
        k in 1usize..=3,
    ) {
        // Simple-graph vertices are 1-based.
        let edges: Vec<(u32, u32)> = edge_bits
            .into_iter()
            .map(|(u, v)| (u % n + 1, v % n + 1))
            .filter(|&(u, v)| u != v)
            .collect();
        let g = SimpleGraph::new(n, edges).unwrap();
        let lifted = is_to_multipartite(&g, k, true).unwrap();
        // Strict lift: a one-per-part IS picks k distinct pairwise
        // non-adjacent vertices of g, so it exists iff g has an IS of size k.
        let lifted_is = multipartite_brute_force_is(&lifted);
        prop_assert_eq!(lifted_is.is_some(), has_independent_set(&g, k));

        // The hardness compilation inverts the answer.
        let inst = multipartite_is_to_qbf(&lifted);
        prop_assert_eq!(oracle_eval(&inst), lifted_is.is_none());
    }
}

fn has_independent_set(g: &SimpleGraph, k: usize) -> bool {
    fn recurse(g: &SimpleGraph, k: usize, start: u32, chosen: &mut Vec<u32>) -> bool {
        if chosen.len() == k {
            return true;
        }
        for v in start..=g.n() {
            if chosen.iter().all(|&u| !g.has_edge(u, v)) {
                chosen.push(v);
                if recurse(g, k, v + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    recurse(g, k, 1, &mut Vec::new())
}
