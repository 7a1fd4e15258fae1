use proptest::prelude::*;
use skilldepth::game::{
    params_from_genome, Action, GameParams, GameState, Physics, Player, MAX_TICKS, MISSILE_LIFETIME,
};
use skilldepth::{Genome, ParamSpace};

const EPS: f64 = 1e-9;

fn genome_5d() -> impl Strategy<Value = Genome> {
    (0..4usize, 0..5usize, 0..10usize, 0..9usize, 0..8usize)
        .prop_map(|(a, b, c, d, e)| Genome(vec![a, b, c, d, e]))
}

fn params() -> impl Strategy<Value = GameParams> {
    genome_5d().prop_map(|g| params_from_genome(&ParamSpace::game_5d(), &g).unwrap())
}

fn actions(len: usize) -> impl Strategy<Value = Vec<(Action, Action)>> {
    let a = (0..5i64).prop_map(|i| Action::from_index(i).unwrap());
    prop::collection::vec((a.clone(), a), len)
}

fn check_invariants(s: &GameState) -> Result<(), TestCaseError> {
    let p = s.params;
    prop_assert!(s.tick <= MAX_TICKS);
    for player in [Player::P1, Player::P2] {
        let ship = s.ship(player);
        prop_assert!(
            ship.vel.norm() <= p.max_ship_speed + EPS,
            "ship speed {}",
            ship.vel.norm()
        );
        prop_assert!((ship.heading.norm() - 1.0).abs() < EPS);
        prop_assert_eq!(ship.score, s.score_from_counters(player));
        let bound = MAX_TICKS.div_ceil(p.cooldown);
        prop_assert!(ship.missiles_fired <= bound);
    }
    for m in &s.missiles {
        prop_assert!(m.age <= MISSILE_LIFETIME);
        prop_assert!(m.vel.norm() <= p.max_missile_speed + EPS);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_step_keeps_invariants(p in params(), seq in actions(MAX_TICKS as usize), seed in any::<u64>()) {
        let mut s = GameState::new(p, seed);
        check_invariants(&s)?;
        for &(a, b) in &seq {
            s.step(a, b).unwrap();
            check_invariants(&s)?;
        }
        prop_assert!(s.is_over());
        prop_assert!(s.step(Action::DoNothing, Action::DoNothing).is_err());
        let outcome = s.outcome().unwrap();
        prop_assert_eq!(outcome.scores, [s.score(Player::P1), s.score(Player::P2)]);
    }

    #[test]
    fn identical_inputs_give_identical_states(p in params(), seq in actions(120), seed in any::<u64>()) {
        let mut a = GameState::new(p, seed);
        let mut b = GameState::new(p, seed);
        for &(x, y) in &seq {
            a.step(x, y).unwrap();
            b.step(x, y).unwrap();
        }
        prop_assert_eq!(a, b);
    }

    #[test]
    fn clones_do_not_alias(p in params(), seq in actions(60), seed in any::<u64>()) {
        let mut s = GameState::new(p, seed);
        for &(x, y) in &seq[..30] {
            s.step(x, y).unwrap();
        }
        let before = s.clone();
        let mut copy = s.clone();
        for &(x, y) in &seq[30..] {
            copy.step(x, y).unwrap();
        }
        prop_assert_eq!(s, before);
    }

    #[test]
    fn mirrored_inputs_keep_rotational_symmetry(p in params(), seq in prop::collection::vec(0..5i64, MAX_TICKS as usize), seed in any::<u64>()) {
        let mut s = GameState::with_physics(p, Physics::without_recoil(), GameState::engine_seeds(seed));
        for &i in &seq {
            let a = Action::from_index(i).unwrap();
            s.step(a, a).unwrap();
            let [one, two] = &s.ships;
            prop_assert_eq!(one.pos, -two.pos);
            prop_assert_eq!(one.vel, -two.vel);
            prop_assert_eq!(one.heading, -two.heading);
            prop_assert_eq!((one.hits, one.missiles_fired), (two.hits, two.missiles_fired));
            let own = |p: Player| s.missiles.iter().filter(move |m| m.owner == p);
            prop_assert_eq!(own(Player::P1).count(), own(Player::P2).count());
            for (m1, m2) in own(Player::P1).zip(own(Player::P2)) {
                prop_assert_eq!(m1.pos, -m2.pos);
                prop_assert_eq!(m1.age, m2.age);
            }
        }
        let outcome = s.outcome().unwrap();
        prop_assert_eq!(outcome.scores[0], outcome.scores[1]);
    }
}

#[test]
fn flying_through_own_missiles_scores_nothing() {
    // Player 1 turns away from player 2, then alternately fires slow missiles
    // and thrusts into them.
    let p = GameParams {
        max_missile_speed: 1.0,
        cooldown: 1,
        ..GameParams::default()
    };
    let mut s = GameState::with_physics(p, Physics::without_recoil(), [1, 2]);
    for _ in 0..16 {
        s.step(Action::RotateClockwise, Action::DoNothing).unwrap();
    }
    let reach = p.ship_radius + skilldepth::game::MISSILE_RADIUS;
    let mut overlaps = 0;
    for t in 0..60 {
        let a = if t % 2 == 0 {
            Action::Shoot
        } else {
            Action::Thrust
        };
        s.step(a, Action::DoNothing).unwrap();
        let me = s.ship(Player::P1).pos;
        overlaps += s
            .missiles
            .iter()
            .filter(|m| m.owner == Player::P1 && (m.pos - me).norm() <= reach)
            .count();
        assert_eq!(
            s.ship(Player::P1).hits + s.ship(Player::P2).hits,
            0,
            "tick {t}"
        );
    }
    assert!(overlaps > 0, "the ship never touched its own missiles");
}
