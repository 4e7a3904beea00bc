//! The reproducible verification battery.
//!
//! Each criterion is a self-contained check with pinned sizes, seeds, and
//! budgets; [`run_all`] executes every one and reports pass/fail with a
//! deterministic summary line. The `acceptance` integration test asserts
//! the battery, and the CLI exposes it as the `suite` subcommand.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{chain_union_closure, is_chain, stronger_than};
use crate::consequence::{
    audit::{check_axioms, AuditMode},
    generated_operator, mask_elems, process_of_operator, sample, transport_operator,
    transport_process, ClosureOperator, Universe,
};
use crate::engines::mp::{mp_close, Cap};
use crate::engines::pattern::{adjective_close, generate, Pattern};
use crate::engines::perfect::{
    perfect_ambient, prove_bounded, strong_close, trivial_close, PerfectLanguage,
};
use crate::formula::{implies, prim, Formula};
use crate::vset::{
    atomicity_criterion, is_transitive, transitive_closure, Superstructure, VSet,
};
use crate::word::{all_subword_codes, decode, encode, enumerate_class, word_of, Alphabet, Word};

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u32, name: &str, passed: bool, detail: String) -> Self {
        CriterionResult {
            id,
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// Runs criteria 1 through 9. Criterion 10 (byte-identical reports) is a
/// property of the CLI and is checked there by serializing two runs.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        axiom_battery(),
        process_round_trip(),
        transport_identities(),
        oracle_equivalence(),
        no_lengthening(),
        completeness_boundary(),
        capped_chain(),
        hierarchy_battery(),
        codec_battery(),
    ]
}

fn labelled<T: Ord + Clone + std::fmt::Display + Send + Sync + 'static>(
    items: impl IntoIterator<Item = T>,
) -> (Universe, Vec<T>) {
    let items: Vec<T> = items.into_iter().collect();
    let labels: Vec<String> = items.iter().map(|t| t.to_string()).collect();
    (
        Universe::new(labels).expect("battery universes are small and distinct"),
        items,
    )
}

fn set_operator<T: Ord + Clone + Send + Sync + 'static>(
    universe: Universe,
    elems: Vec<T>,
    close: impl Fn(&BTreeSet<T>) -> BTreeSet<T> + Send + Sync + 'static,
) -> ClosureOperator {
    ClosureOperator::from_rule(universe, move |mask| {
        let input: BTreeSet<T> = mask_elems(mask).map(|i| elems[i].clone()).collect();
        let output = close(&input);
        elems
            .iter()
            .enumerate()
            .filter(|(_, e)| output.contains(e))
            .fold(0, |m, (i, _)| m | 1 << i)
    })
}

/// A formula universe closed under taking consequents, so modus ponens
/// closures stay inside it.
fn mp_formula_universe() -> (Universe, Vec<Formula>) {
    labelled([
        prim(0),
        prim(1),
        prim(2),
        prim(3),
        prim(4),
        implies(prim(0), prim(1)),
        implies(prim(1), prim(2)),
        implies(prim(2), prim(3)),
        implies(prim(3), prim(4)),
        implies(prim(0), prim(3)),
        implies(prim(1), prim(4)),
        implies(prim(0), prim(2)),
    ])
}

fn mp_operator(cap: Cap) -> ClosureOperator {
    let (u, elems) = mp_formula_universe();
    set_operator(u, elems, move |b| mp_close(b, cap))
}

fn criterion_operators() -> Vec<(&'static str, ClosureOperator)> {
    let mut ops: Vec<(&'static str, ClosureOperator)> = Vec::new();

    ops.push((
        "identity",
        ClosureOperator::identity(Universe::opaque(12).unwrap()),
    ));

    let base: Vec<String> = ["bold", "kind", "just"].map(String::from).to_vec();
    let (u, elems) = labelled(generate(&base, 3));
    ops.push(("adjective", set_operator(u, elems, |b| adjective_close(b))));

    let base2: Vec<String> = ["bold", "kind"].map(String::from).to_vec();
    let ambient = perfect_ambient(&base2, 4);
    let (u, elems) = labelled(ambient.clone());
    ops.push((
        "perfect-trivial",
        set_operator(u, elems, move |b| trivial_close(b, &ambient)),
    ));

    let lang = PerfectLanguage::new(["b"], 3);
    let (u, elems) = labelled(lang.all());
    ops.push((
        "perfect-strong",
        set_operator(u, elems, move |b| {
            strong_close(&lang, b).expect("universe elements are in the language")
        }),
    ));

    ops.push(("mp", mp_operator(Cap::Unlimited)));
    ops.push(("mp-cap-0", mp_operator(Cap::Index(0))));
    ops.push(("mp-cap-1", mp_operator(Cap::Index(1))));
    ops.push(("mp-cap-2", mp_operator(Cap::Index(2))));
    ops.push(("mp-cap-3", mp_operator(Cap::Index(3))));
    ops
}

/// Criterion 1: the named engines satisfy extensiveness, idempotence, and
/// the finitary axiom, exhaustively, inside a runtime budget.
fn axiom_battery() -> CriterionResult {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut audited = 0;
    for (name, op) in criterion_operators() {
        let report = check_axioms(&op, &[2, 3, 4], AuditMode::Exhaustive { cap: 12 })
            .expect("battery universes fit the exhaustive cap");
        audited += 1;
        if !report.passed_all() {
            failures.push(name.to_string());
        }
    }
    let within_budget = started.elapsed() <= Duration::from_secs(60);
    CriterionResult::new(
        1,
        "axiom battery over the engine operators",
        failures.is_empty() && within_budget,
        if failures.is_empty() {
            format!("{audited} operators audited exhaustively, all pass (2)(3)(4)")
        } else {
            format!("failing operators: {failures:?}")
        },
    )
}

/// Criterion 2: seeded total+ordinary+singular processes generate operators
/// that satisfy the axioms and survive the operator/process round trip.
fn process_round_trip() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e9);
    let mut checked = 0;
    let mut failures = 0;
    for case in 0..200 {
        let size = 2 + case % 4; // 2..=5
        let universe = Universe::opaque(size).unwrap();
        let k = sample::random_tos_process(&mut rng, &universe);
        let class = k.classify();
        let op = generated_operator(&k).expect("total process");
        let report = check_axioms(&op, &[2, 3, 4], AuditMode::Exhaustive { cap: 12 })
            .expect("small universe");
        let back = generated_operator(&process_of_operator(&op).unwrap()).unwrap();
        let round_trip = op.extensionally_eq(&back).unwrap();
        if !(class.total && class.ordinary() && class.singular)
            || !report.passed_all()
            || !round_trip
        {
            failures += 1;
        }
        checked += 1;
    }
    CriterionResult::new(
        2,
        "operator/process round trip on seeded processes",
        failures == 0,
        format!("{checked} processes checked, {failures} failures"),
    )
}

/// Criterion 3: transport along injections commutes with operator
/// generation, and the inverse-image identities hold subset by subset.
fn transport_identities() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe7a);
    let mut checked = 0;
    let mut failures = 0;
    for case in 0..100 {
        let size = 2 + case % 3; // 2..=4
        let universe = Universe::opaque(size).unwrap();
        let k = sample::random_tos_process(&mut rng, &universe);
        let inj = sample::random_injection(&mut rng, &universe, 6);
        let op = generated_operator(&k).unwrap();

        let moved_op = transport_operator(&inj, &op).unwrap();
        let generated_moved = generated_operator(&transport_process(&inj, &k).unwrap()).unwrap();
        let commutes = moved_op.extensionally_eq(&generated_moved).unwrap();

        let image = inj.image_universe();
        let mut identities = true;
        for b in 0..=image.full_mask() {
            let pulled = inj.pull_mask(b, &image);
            identities &= inj.pull_mask(moved_op.apply(b), &image) == op.apply(pulled);
            identities &= moved_op.apply(b) == inj.push_mask(op.apply(pulled), &image);
        }

        if !commutes || !identities {
            failures += 1;
        }
        checked += 1;
    }
    CriterionResult::new(
        3,
        "transport commutes with generation",
        failures == 0,
        format!("{checked} injection cases checked, {failures} failures"),
    )
}

fn oracle_language() -> (PerfectLanguage, Vec<Formula>) {
    let lang = PerfectLanguage::new(["b", "k"], 3);
    let all: Vec<Formula> = lang.all().into_iter().collect();
    (lang, all)
}

fn small_subsets(items: &[Formula], max_len: usize) -> Vec<BTreeSet<Formula>> {
    let mut out = vec![BTreeSet::new()];
    let mut current: Vec<BTreeSet<Formula>> = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for base in &current {
            let last = base.iter().next_back();
            for f in items {
                if last.is_none_or(|l| l < f) {
                    let mut grown = base.clone();
                    grown.insert(f.clone());
                    next.push(grown);
                }
            }
        }
        out.extend(next.iter().cloned());
        current = next;
    }
    out
}

/// Criterion 4: membership in the closed-form strong closure coincides with
/// bounded proof search at seven inference steps, for every premise set of
/// at most three formulas.
fn oracle_equivalence() -> CriterionResult {
    let started = Instant::now();
    let (lang, all) = oracle_language();
    let subsets = small_subsets(&all, 3);
    let mut compared = 0;
    let mut mismatches = 0;
    for d in &subsets {
        let closure = strong_close(&lang, d).expect("subsets of the language");
        for x in &all {
            let proved = prove_bounded(&lang, d, x, 7)
                .expect("search space is tiny")
                .is_some();
            if proved != closure.contains(x) {
                mismatches += 1;
            }
            compared += 1;
        }
    }
    let within_budget = started.elapsed() <= Duration::from_secs(120);
    CriterionResult::new(
        4,
        "strong closure agrees with bounded proof search",
        mismatches == 0 && within_budget,
        format!(
            "{} premise sets by {} goals = {compared} memberships, {mismatches} mismatches",
            subsets.len(),
            all.len()
        ),
    )
}

/// Criterion 5: a flat form strictly longer than every premise is never in
/// the strong closure.
fn no_lengthening() -> CriterionResult {
    let lang = PerfectLanguage::new(["b", "k"], 4);
    let bases = ["b", "k"];
    let mut checked = 0;
    let mut failures = 0;
    for base in bases {
        for n in 1..=4u32 {
            let goal = PerfectLanguage::pattern_formula(&Pattern::new(base, n));
            let shorter: Vec<Formula> = bases
                .iter()
                .flat_map(|b| (0..n).map(|k| PerfectLanguage::pattern_formula(&Pattern::new(*b, k))))
                .collect();
            for premises in small_subsets(&shorter, shorter.len()) {
                let closure = strong_close(&lang, &premises).unwrap();
                if closure.contains(&goal) {
                    failures += 1;
                }
                checked += 1;
            }
        }
    }
    CriterionResult::new(
        5,
        "no premise set of shorter forms derives a longer form",
        failures == 0,
        format!("{checked} (goal, premise-set) pairs checked, {failures} failures"),
    )
}

/// Criterion 6: the strong closure covers the whole language exactly when
/// the premises contain the entire perfect stratum.
fn completeness_boundary() -> CriterionResult {
    let (lang, all) = oracle_language();
    let everything = lang.all();
    let stratum = lang.implications();
    let mut checked = 0;
    let mut failures = 0;
    for d in small_subsets(&all, 3) {
        let closure = strong_close(&lang, &d).unwrap();
        let covers = everything.is_subset(&closure);
        let has_stratum = stratum.is_subset(&d);
        if covers != has_stratum {
            failures += 1;
        }
        checked += 1;
    }
    CriterionResult::new(
        6,
        "full coverage exactly at the perfect stratum",
        failures == 0,
        format!("{checked} premise sets checked, {failures} failures"),
    )
}

/// Criterion 7: capped modus ponens closures form a chain agreeing with the
/// composition criterion, the cap gates exactly the high-index inferences,
/// and the chain union reconstructs the uncapped closure.
fn capped_chain() -> CriterionResult {
    let family: Vec<ClosureOperator> = (0..=3).map(|n| mp_operator(Cap::Index(n))).collect();
    let check = is_chain(&family).expect("members satisfy the axioms");
    let mut ordered = true;
    for pair in family.windows(2) {
        ordered &= stronger_than(&pair[0], &pair[1]).unwrap();
    }

    let mut gating = true;
    for n in 0..4u32 {
        for m in n + 1..=4 {
            let premises: BTreeSet<Formula> = [prim(n), implies(prim(n), prim(m))].into();
            gating &= !mp_close(&premises, Cap::Index(n)).contains(&prim(m));
            gating &= mp_close(&premises, Cap::Index(m)).contains(&prim(m));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xc4a1);
    let pool: Vec<Formula> = {
        let mut pool = Vec::new();
        for i in 0..5u32 {
            pool.push(prim(i));
        }
        for i in 0..5u32 {
            for j in 0..5u32 {
                pool.push(implies(prim(i), prim(j)));
            }
        }
        pool.push(implies(prim(0), implies(prim(1), prim(2))));
        pool.push(implies(prim(2), implies(prim(3), prim(4))));
        pool
    };
    let mut union_failures = 0;
    for _ in 0..100 {
        let len = rng.gen_range(1..=6);
        let premises: BTreeSet<Formula> = (0..len)
            .map(|_| pool[rng.gen_range(0..pool.len())].clone())
            .collect();
        if !chain_union_closure(&premises).agrees {
            union_failures += 1;
        }
    }

    let passed = check.is_chain()
        && check.criteria_agree()
        && ordered
        && gating
        && union_failures == 0;
    CriterionResult::new(
        7,
        "capped closures form a chain with union the uncapped closure",
        passed,
        format!(
            "chain={} agreement={} gating={} union failures={union_failures}/100",
            check.is_chain(),
            check.criteria_agree(),
            gating
        ),
    )
}

fn parse_ground(text: &str) -> BTreeSet<VSet> {
    match text.parse::<VSet>().expect("battery literals parse") {
        VSet::Set(m) => m,
        VSet::Atom(_) => unreachable!("battery grounds are sets"),
    }
}

/// Criterion 8: hierarchy levels are ground-transitive with descending
/// membership, transitive closures behave as closures, and the atomicity
/// criterion is sufficient on a constructed battery.
fn hierarchy_battery() -> CriterionResult {
    let grounds = [
        "{a}",
        "{a, b}",
        "{a, b, c}",
        "{{}}",
        "{{a}}",
        "{{a}, a}",
        "{{a}, b}",
        "{{a, b}}",
        "{{a, b}, c}",
        "{{}, a}",
        "{{{a}}}",
        "{{{a}}, {a}, a}",
        "{{a}, {b}}",
        "{{a, b, c}}",
        "{x}",
        "{x, y}",
        "{{x}, y}",
        "{{x, y}}",
        "{{{x}}, x}",
        "{{}, {a}}",
        "{{a}, {a, b}}",
        "{p, q, r}",
    ];
    let mut levels_ok = true;
    let mut built = 0;
    for g in grounds {
        let ground = parse_ground(g);
        for depth in (0..=3).rev() {
            let Ok(s) = Superstructure::build(ground.clone(), depth) else {
                continue;
            };
            built += 1;
            for level in s.levels() {
                levels_ok &= is_transitive(level, s.ground());
            }
            for n in 0..depth {
                let (lower, upper) = (s.level(n).unwrap(), s.level(n + 1).unwrap());
                for x in upper {
                    if s.ground().contains(x) {
                        continue;
                    }
                    levels_ok &= x
                        .members()
                        .is_some_and(|m| m.iter().all(|y| lower.contains(y)));
                }
            }
            break; // deepest buildable depth is enough; lower depths are prefixes
        }
    }

    let mut closure_ok = true;
    let closure_battery = [
        "{{a}}",
        "{{{a}}, b}",
        "{{a, {b}}, {{}}}",
        "{a, {a}, {{a}}}",
        "{{}, {{}}}",
        "{{a, b}, {b, c}}",
    ];
    for text in closure_battery {
        let value: VSet = text.parse().unwrap();
        let tc = transitive_closure(&value);
        for x in &tc {
            if let Some(members) = x.members() {
                closure_ok &= members.iter().all(|y| tc.contains(y));
            }
        }
        closure_ok &= transitive_closure(&VSet::Set(tc.clone())) == tc;
        // Monotonicity: adding a member only grows the closure.
        if let Some(members) = value.members() {
            let mut grown = members.clone();
            grown.insert(VSet::set([VSet::atom("zz")]));
            let tc_grown = transitive_closure(&VSet::Set(grown));
            closure_ok &= tc.is_subset(&tc_grown);
        }
    }

    let mut criterion_ok = true;
    let mut criterion_checked = 0;
    for g in grounds {
        let ground = parse_ground(g);
        if !atomicity_criterion(&ground) {
            continue;
        }
        let s = Superstructure::build(ground, 2).unwrap();
        for n in 0..=2 {
            criterion_ok &= s.is_n_atomic(n).unwrap();
        }
        criterion_checked += 1;
    }

    CriterionResult::new(
        8,
        "hierarchy levels, transitive closures, and atomicity criterion",
        levels_ok && closure_ok && criterion_ok && built >= 20 && criterion_checked >= 8,
        format!(
            "{built} hierarchies built, levels_ok={levels_ok}, closures_ok={closure_ok}, \
             criterion holds on {criterion_checked} qualifying grounds"
        ),
    )
}

/// Criterion 9: codes round-trip and equivalence classes have composition
/// counts with unique extremes, exhaustively over short words.
fn codec_battery() -> CriterionResult {
    let alphabet = Alphabet::new(["a", "b", "|||"], "|||").unwrap();
    let mut words: Vec<Word> = Vec::new();
    let mut frontier: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..6 {
        let mut next = Vec::new();
        for prefix in &frontier {
            for g in alphabet.glyphs() {
                let mut grown = prefix.clone();
                grown.push(g.clone());
                next.push(grown);
            }
        }
        words.extend(next.iter().map(|g| Word::new(g.clone()).unwrap()));
        frontier = next;
    }

    let mut round_trip_ok = true;
    let mut codes = BTreeSet::new();
    for w in &words {
        let code = encode(w, &alphabet).unwrap();
        round_trip_ok &= decode(code, &alphabet).unwrap() == *w;
        round_trip_ok &= codes.insert(code);
    }

    let mut classes_ok = true;
    for w in &words {
        let h = all_subword_codes(w, &alphabet).unwrap();
        let class = enumerate_class(w, &h, &alphabet).unwrap();
        let m = w.len() - 1;
        classes_ok &= class.members.len() == 1 << m;
        classes_ok &= class.members_with_dom_upper(0) == 1;
        classes_ok &= class.members_with_dom_upper(m) == 1;
        for k in 0..=m {
            classes_ok &= class.members_with_dom_upper(k) >= 1;
        }
        classes_ok &= class
            .members
            .iter()
            .all(|f| f.dom_upper() <= m && word_of(f, &alphabet).unwrap() == *w);
    }

    CriterionResult::new(
        9,
        "codec round trip and class cardinality",
        round_trip_ok && classes_ok,
        format!(
            "{} words round-tripped with distinct codes, classes sized 2^(len-1) with unique extremes",
            words.len()
        ),
    )
}
