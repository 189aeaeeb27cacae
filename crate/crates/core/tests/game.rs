use gridgame::strategy::{
    dlb_defense, exact_best_response, greedy_attacker_response, greedy_defender_response, uniform_load_attack,
    UniformAttackConfig,
};
use gridgame::testkit::{self, fixtures};
use gridgame::{
    double_oracle, solve_full_enumeration, DoubleOracleConfig, GridGame, MixedStrategy, NodeSet, OracleKind,
    PureStrategy, Side,
};

const TOL: f64 = 1e-9;

fn instances() -> impl Iterator<Item = (GridGame, usize, usize)> {
    (0..24u64).map(|seed| {
        let n = 5 + (seed % 3) as usize;
        let alpha = [0.0, 0.25, 0.5, 1.0][(seed % 4) as usize];
        let game = GridGame::new(testkit::random_game_grid(n, 0.3, seed), alpha).unwrap();
        let k_a = 1 + (seed % 2) as usize;
        let k_d = 1 + (seed / 2 % 2) as usize;
        (game, k_a, k_d)
    })
}

#[test]
fn double_oracle_matches_full_enumeration() {
    for (game, k_a, k_d) in instances() {
        let full = solve_full_enumeration(&game, k_a, k_d).unwrap();
        let dor = double_oracle(&game, k_a, k_d, &DoubleOracleConfig::default()).unwrap();
        assert!(dor.converged);
        assert!((dor.value - full.value).abs() <= TOL, "{} vs {}", dor.value, full.value);
    }
}

#[test]
fn responses_bracket_the_value() {
    for (game, k_a, k_d) in instances() {
        let v = solve_full_enumeration(&game, k_a, k_d).unwrap().value;
        let dor = double_oracle(&game, k_a, k_d, &DoubleOracleConfig::default()).unwrap();
        for d in &dor.diagnostics {
            assert!(d.defender_response_value <= v + TOL);
            assert!(d.attacker_response_value >= v - TOL);
        }
    }
}

#[test]
fn greedy_defense_is_exact_against_singletons() {
    for (game, _, k_d) in instances() {
        let loads: Vec<PureStrategy> = game
            .network()
            .nodes()
            .map(|v| PureStrategy::new(NodeSet::singleton(v), 1).unwrap())
            .collect();
        let attack = MixedStrategy::uniform(loads).unwrap();
        let greedy = greedy_defender_response(&game, &attack, k_d).unwrap();
        let exact = exact_best_response(&game, &attack, k_d, Side::Defender).unwrap();
        assert!(
            (greedy.value - exact.value).abs() <= TOL,
            "{} vs {}",
            greedy.value,
            exact.value
        );
    }
}

#[test]
fn greedy_defense_is_exact_against_small_pure_attack() {
    for (game, k_a, _) in instances() {
        let attack: NodeSet = game.network().nodes().take(k_a).collect();
        let mix = MixedStrategy::pure(PureStrategy::new(attack.clone(), k_a).unwrap());
        let greedy = greedy_defender_response(&game, &mix, k_a).unwrap();
        assert_eq!(greedy.value, 0.0);
        assert_eq!(greedy.strategy.nodes(), &attack);
    }
}

#[test]
fn greedy_responses_never_beat_exact() {
    for (game, k_a, k_d) in instances() {
        let mix = MixedStrategy::pure(dlb_defense(game.network(), k_d).unwrap());
        let greedy = greedy_attacker_response(&game, &mix, k_a).unwrap();
        let exact = exact_best_response(&game, &mix, k_a, Side::Attacker).unwrap();
        assert!(greedy.value <= exact.value + TOL);
    }
}

#[test]
fn fixed_defense_and_uniform_attack_bound_the_value() {
    for (game, k_a, k_d) in instances() {
        let v = solve_full_enumeration(&game, k_a, k_d).unwrap().value;
        let dlb = MixedStrategy::pure(dlb_defense(game.network(), k_d).unwrap());
        assert!(exact_best_response(&game, &dlb, k_a, Side::Attacker).unwrap().value >= v - TOL);
        if k_a <= game.loads().len() {
            let uniform = uniform_load_attack(game.network(), k_a, &UniformAttackConfig::default()).unwrap();
            assert!(exact_best_response(&game, &uniform, k_d, Side::Defender).unwrap().value <= v + TOL);
        }
    }
}

#[test]
fn k22_and_sc1() {
    let game = GridGame::new(fixtures::k22(), 3.0).unwrap();
    for oracle in [OracleKind::Exact, OracleKind::Greedy] {
        let sol = double_oracle(
            &game,
            1,
            1,
            &DoubleOracleConfig {
                oracle,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((sol.value - 0.5).abs() <= TOL);
    }
    let sc = fixtures::sc1();
    let game = GridGame::new(sc.network.clone(), sc.alpha).unwrap();
    let attack: NodeSet = sc.network.nodes().filter(|&v| !sc.network.is_load(v)).collect();
    let mix = MixedStrategy::pure(PureStrategy::new(attack, sc.attacker_budget).unwrap());
    // no single subset covers the ground set, two do
    let one = exact_best_response(&game, &mix, 1, Side::Defender).unwrap();
    let two = exact_best_response(&game, &mix, 2, Side::Defender).unwrap();
    assert_eq!((one.value, two.value), (1.0, 0.0));
}

#[test]
fn thread_count_does_not_change_results() {
    let run = || {
        let g = gridgame::grid::generate_synthetic(14, 18, 0.3, 0.3, 11).unwrap();
        let game = GridGame::new(g, 0.3).unwrap();
        let sol = double_oracle(&game, 1, 1, &DoubleOracleConfig::default()).unwrap();
        (
            sol.value.to_bits(),
            format!("{:?}", sol.defender_mix),
            format!("{:?}", sol.attacker_mix),
        )
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(run);
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(run);
    assert_eq!(single, many);
}
