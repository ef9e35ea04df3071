//! Seeded random systems on grounds outside the exhaustive universe,
//! checked against the direct oracle. `SPLITCOMPAT_SEED` overrides the seed.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use splitcompat::engine::{census_representations, check_compatibility};
use splitcompat::oracle::{oracle_compatible, OracleBudget};
use splitcompat::{MTree, Multiset, Split, SplitSystem};

const INSTANCES: usize = 300;

fn seed() -> u64 {
    std::env::var("SPLITCOMPAT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(7)
}

fn random_system(rng: &mut StdRng) -> Option<SplitSystem> {
    let names = ["p", "q", "r", "s", "t"];
    let support = rng.gen_range(2..=names.len());
    let counts: Vec<u32> = (0..support).map(|_| rng.gen_range(1..=3)).collect();
    if counts.iter().sum::<u32>() > 7 {
        return None;
    }
    let ground = Multiset::from_counts(names.iter().zip(&counts).map(|(n, &c)| (n.to_string(), c))).unwrap();
    let n = rng.gen_range(1..=4);
    let mut splits = Vec::new();
    while splits.len() < n {
        let part = Multiset::from_counts(
            names.iter().zip(&counts).map(|(x, &c)| (x.to_string(), rng.gen_range(0..=c))),
        )
        .unwrap();
        if !part.is_empty() && part.len() < ground.len() {
            splits.push(Split::from_part(&ground, part).unwrap());
        }
    }
    Some(SplitSystem::new(ground, splits).unwrap())
}

#[test]
fn engine_census_and_oracle_agree() {
    let seed = seed();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut done = 0;
    let mut compatible = 0;
    while done < INSTANCES {
        let Some(s) = random_system(&mut rng) else { continue };
        done += 1;
        let oracle = oracle_compatible(&s, OracleBudget::default()).unwrap();
        let engine = check_compatibility(&s).unwrap();
        assert_eq!(engine.compatible, oracle.compatible, "seed {seed}: {s}");
        if let Some(tree) = &engine.representation {
            compatible += 1;
            assert!(tree.represents(&s), "seed {seed}: {s}");
            let census = census_representations(&s, 100_000).unwrap();
            assert!(census.violations.is_empty(), "seed {seed}: {s}");
            let mut a: Vec<_> = census.iso_classes.iter().map(|c| c.tree.canonical_form()).collect();
            let mut b: Vec<_> = oracle.representations.iter().map(MTree::canonical_form).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b, "seed {seed}: {s}");
        }
    }
    assert!(compatible > 0);
}
