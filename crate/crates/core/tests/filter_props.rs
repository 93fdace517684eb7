use num_traits::Zero;
use proptest::prelude::*;
use qreality::census::{emit_report, run_census, CensusMode, ReportFormat};
use qreality::filters::*;
use qreality::integral::{Density, Density1, Density2};
use qreality::linfeas::{VarId, Witness};
use qreality::logic::{enumerate_coevents, Coevent, SampleSpace};
use qreality::measure::{extend_from_pairs, is_preclusive};
use qreality::rational::{int, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sp(n: usize) -> SampleSpace {
    SampleSpace::new(n).unwrap()
}

fn point(density: &Density) -> Witness {
    let mut w = Witness::new();
    match density {
        Density::One(f) => {
            for (i, v) in f.values().iter().enumerate() {
                w.set(VarId::Density1(i + 1), v.clone());
            }
        }
        Density::Two(f) => {
            for i in 1..=f.n() {
                for j in i..=f.n() {
                    w.set(VarId::density2(i, j), f.get(i, j).clone());
                }
            }
        }
    }
    w
}

#[test]
fn leaves_cover_the_positive_orthant_n2() {
    let space = sp(2);
    let coevents: Vec<Coevent> = enumerate_coevents(space, None).unwrap().collect();
    let opts = SearchOptions::default();
    let leaves: Vec<Vec<Vec<Leaf>>> = FilterMode::ALL
        .iter()
        .map(|&m| coevents.iter().map(|phi| enumerate_leaves(phi, m, &opts).unwrap()).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0e);
    for case in 0..1000 {
        let m = rng.gen_range(0..3);
        let k = rng.gen_range(0..coevents.len());
        let mode = FilterMode::ALL[m];
        let density = match mode {
            FilterMode::Gen1 => Density::One(Density1::new((0..2).map(|_| int(rng.gen_range(1..5))).collect()).unwrap()),
            _ => Density::Two(Density2::new(2, (0..3).map(|_| int(rng.gen_range(1..5))).collect()).unwrap()),
        };
        let concrete = induced_values(&coevents[k], mode, &density).unwrap();
        let at = point(&density);
        let hit = leaves[m][k].iter().any(|leaf| {
            leaf.system.holds_at(&at) && leaf.values.iter().map(|e| e.eval(&at)).collect::<Vec<Q>>() == concrete
        });
        assert!(hit, "case {case}: {} under {mode} at {density:?} lies in no leaf", coevents[k]);
    }
}

#[test]
fn one_generated_with_mass_is_actualized() {
    let space = sp(3);
    let mut checked = 0;
    for phi in enumerate_coevents(space, None).unwrap() {
        let v = check_1generated_existential(&phi).unwrap();
        let Some(w) = v.witness() else { continue };
        let mu = w.measure.clone().unwrap();
        let Density::One(f) = &w.density else { panic!("gen1 witness must be a 1-density") };
        if mu.total().is_zero() {
            continue;
        }
        let g = induced_actualizing_density(f, mu.total()).unwrap();
        let problem = GenerationProblem::new(phi, FilterMode::Actualize, MeasureSpec::Fixed(mu.clone())).unwrap();
        let verdict = FilterVerdict {
            mode: FilterMode::Actualize,
            outcome: Outcome::Feasible(FeasibleWitness { density: Density::Two(g), measure: None, trace: Vec::new() }),
            branches_explored: 0,
        };
        assert!(verify_witness(&verdict, &problem), "{phi}");
        assert!(check_actualized(&phi, &mu).unwrap().is_feasible(), "{phi}");
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn census_is_reproducible() {
    let modes = [CensusMode::Classify, CensusMode::Gen1, CensusMode::Gen2, CensusMode::Actualize];
    let a = emit_report(&run_census(2, &modes, &SearchOptions::default(), 1).unwrap(), ReportFormat::Json);
    let b = emit_report(&run_census(2, &modes, &SearchOptions::default(), 2).unwrap(), ReportFormat::Json);
    assert_eq!(a, b);
}

#[test]
fn census_witnesses_reverify() {
    let modes = [CensusMode::Gen1, CensusMode::Gen2, CensusMode::Actualize];
    let report = run_census(2, &modes, &SearchOptions::default(), 1).unwrap();
    for row in &report.rows {
        let phi = Coevent::parse(sp(2), &row.coevent).unwrap();
        for mode in FilterMode::ALL {
            let rv = row.verdict(mode).unwrap();
            let Some(file) = rv.witness.clone() else { continue };
            let v = file.into_verdict().unwrap();
            assert!(verify_witness(&v, &GenerationProblem::existential(phi, mode)), "{phi} {mode}");
        }
    }
}

#[test]
fn branch_rules_agree_on_fixed_measures_n3() {
    let space = sp(3);
    let closed = SearchOptions { rule: BranchRule::ClosedCones, ..SearchOptions::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut done = 0;
    while done < 40 {
        let singles: Vec<Q> = (0..3).map(|_| int(rng.gen_range(0..4))).collect();
        let pairs: Vec<Q> = (0..3).map(|_| int(rng.gen_range(0..6))).collect();
        let Ok(mu) = extend_from_pairs(space, &singles, &pairs) else { continue };
        let phi = Coevent::from_index(space, rng.gen_range(0..128)).unwrap();
        for mode in [FilterMode::Gen1, FilterMode::Gen2] {
            let p = GenerationProblem::new(phi, mode, MeasureSpec::Fixed(mu.clone())).unwrap();
            let weak = decide(&p, &SearchOptions::default()).unwrap();
            let cones = decide(&p, &closed).unwrap();
            assert_eq!(weak.is_feasible(), cones.is_feasible(), "{phi} {mode} {mu:?}");
        }
        done += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_coevents_are_preclusive(
        k in 0u64..128,
        s in prop::collection::vec(0i64..3, 3),
        p in prop::collection::vec(0i64..4, 3),
        gen2 in any::<bool>(),
    ) {
        let space = sp(3);
        let Ok(mu) = extend_from_pairs(space, &s.iter().map(|&v| int(v)).collect::<Vec<_>>(), &p.iter().map(|&v| int(v)).collect::<Vec<_>>()) else {
            return Ok(());
        };
        let phi = Coevent::from_index(space, k).unwrap();
        let mode = if gen2 { FilterMode::Gen2 } else { FilterMode::Gen1 };
        let opts = SearchOptions { rule: BranchRule::ClosedCones, ..SearchOptions::default() };
        let problem = GenerationProblem::new(phi, mode, MeasureSpec::Fixed(mu.clone())).unwrap();
        let v = decide(&problem, &opts).unwrap();
        if v.is_feasible() {
            prop_assert!(is_preclusive(&phi, &mu).unwrap().preclusive);
            prop_assert_eq!(witness_is_preclusive(&problem, &v), Some(true));
        }
    }
}
