use prefmab::rng::{derive_stream, StreamRole};
use rand::RngCore;

fn first_words(seed: u64, trial: u64, role: StreamRole) -> [u64; 4] {
    let mut rng = derive_stream(seed, trial, role);
    [
        rng.next_u64(),
        rng.next_u64(),
        rng.next_u64(),
        rng.next_u64(),
    ]
}

#[test]
fn identical_keys_give_identical_streams() {
    assert_eq!(
        first_words(7, 0, StreamRole::Reward),
        first_words(7, 0, StreamRole::Reward)
    );
}

#[test]
fn roles_are_separated() {
    let roles = [
        StreamRole::Reward,
        StreamRole::Preference,
        StreamRole::Policy,
        StreamRole::Protocol,
    ];
    for (i, a) in roles.iter().enumerate() {
        for b in roles.iter().skip(i + 1) {
            assert_ne!(first_words(7, 0, *a), first_words(7, 0, *b));
        }
    }
}

#[test]
fn trials_are_separated() {
    assert_ne!(
        first_words(7, 0, StreamRole::Reward),
        first_words(7, 1, StreamRole::Reward)
    );
}

#[test]
fn seeds_are_separated() {
    assert_ne!(
        first_words(7, 0, StreamRole::Reward),
        first_words(8, 0, StreamRole::Reward)
    );
}

#[test]
fn nearby_keys_do_not_collide_pairwise() {
    // A weak avalanche check: 4 roles x 8 trials x 4 seeds all distinct.
    let mut seen = std::collections::HashSet::new();
    for seed in 0..4u64 {
        for trial in 0..8u64 {
            for role in [
                StreamRole::Reward,
                StreamRole::Preference,
                StreamRole::Policy,
                StreamRole::Protocol,
            ] {
                assert!(seen.insert(first_words(seed, trial, role)));
            }
        }
    }
}
