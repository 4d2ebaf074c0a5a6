mod common;

use proptest::prelude::*;
use stallings::dicks::{Color, ColoredMultigraph, IncrementalCase};

use common::{all_slots, check_increment, check_sigma, sigma_oracle};

fn graph(n: usize, mask: &[bool]) -> ColoredMultigraph {
    let slots = all_slots(n);
    ColoredMultigraph::from_edges(n, slots.into_iter().zip(mask).filter(|(_, &m)| m).map(|(s, _)| s)).unwrap()
}

fn instance() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (2usize..=8).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(any::<bool>(), 3 * n * (n - 1) / 2),
        )
    })
}

#[test]
fn small_cases() {
    let tri = ColoredMultigraph::from_edges(
        3,
        [(0, 1, Color::Magenta), (1, 2, Color::Yellow), (0, 2, Color::Cyan)],
    )
    .unwrap();
    assert_eq!(tri.sigma(), 1);
    assert!(tri.has_nonmonochromatic_cycle());
    let doubled = ColoredMultigraph::from_edges(2, [(0, 1, Color::Magenta), (0, 1, Color::Cyan)]).unwrap();
    assert_eq!((doubled.sigma(), sigma_oracle(&doubled)), (1, 1));
    assert_eq!(ColoredMultigraph::new(5).sigma(), 5);
}

#[test]
fn case_names_match_deltas() {
    let g = ColoredMultigraph::from_edges(3, [(0, 1, Color::Magenta), (1, 2, Color::Yellow)]).unwrap();
    assert_eq!(
        g.incremental_case(0, 2, Color::Cyan),
        IncrementalCase::NeitherConnected
    );
    assert_eq!(g.incremental_case(0, 2, Color::Cyan).predicted_delta(), -2);
    let unjoined = ColoredMultigraph::new(2);
    assert_eq!(unjoined.incremental_case(0, 1, Color::Cyan).predicted_delta(), 0);
}

#[test]
fn rejects_loops_and_duplicates() {
    let mut g = ColoredMultigraph::new(2);
    assert!(g.add_edge(0, 0, Color::Cyan).is_err());
    g.add_edge(0, 1, Color::Cyan).unwrap();
    assert!(g.add_edge(1, 0, Color::Cyan).is_err());
    assert!(g.add_edge(0, 2, Color::Cyan).is_err());
}

#[test]
fn parses_edge_lists() {
    let g = ColoredMultigraph::parse(
        "# triangle\nvertices 4\nedge 0 1 magenta\nedge 1 2 yellow\nedge 2 0 cyan\n",
    )
    .unwrap();
    assert_eq!((g.n(), g.edges().len(), g.sigma()), (4, 3, 2));
    assert!(ColoredMultigraph::parse("edge 0 1 purple\n").is_err());
    assert!(ColoredMultigraph::parse("edge 0 0 cyan\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn sigma_matches_oracles((n, mask) in instance()) {
        let g = graph(n, &mask);
        prop_assert_eq!(check_sigma(&g), Ok(()));
    }

    #[test]
    fn increments_match_case_analysis((n, mask) in instance(), pick in any::<prop::sample::Index>()) {
        let g = graph(n, &mask);
        let free: Vec<_> = all_slots(n).into_iter().zip(&mask).filter(|(_, &m)| !m).map(|(s, _)| s).collect();
        prop_assume!(!free.is_empty());
        let (p, q, c) = free[pick.index(free.len())];
        prop_assert_eq!(check_increment(&g, p, q, c), Ok(()));
    }

    #[test]
    fn sigma_is_additive_over_disjoint_unions((n, mask) in instance(), (m, other) in instance()) {
        let (g, h) = (graph(n, &mask), graph(m, &other));
        let shifted = h.edges().iter().map(|&(p, q, c)| (p + n, q + n, c));
        let union = ColoredMultigraph::from_edges(n + m, g.edges().iter().copied().chain(shifted)).unwrap();
        prop_assert_eq!(union.sigma(), g.sigma() + h.sigma());
    }
}
