//! Σ on 3-edge-colored multigraphs and the effect of adding one edge.

use stallings::dicks::{Color, ColoredMultigraph};

fn main() {
    let mut g = ColoredMultigraph::new(4);
    let steps = [
        (0, 1, Color::Magenta),
        (1, 2, Color::Yellow),
        (2, 3, Color::Cyan),
        (0, 2, Color::Cyan),
        (0, 1, Color::Yellow),
        (1, 3, Color::Magenta),
    ];
    println!("start: Σ = {}", g.sigma());
    for (p, q, c) in steps {
        let case = g.incremental_case(p, q, c);
        let before = g.sigma();
        g.add_edge(p, q, c).unwrap();
        println!(
            "add {p}-{q} {:<7} {:?}: Σ {before} -> {} (predicted Δ {}), mixed cycle: {}",
            c.name(),
            case,
            g.sigma(),
            case.predicted_delta(),
            g.has_nonmonochromatic_cycle()
        );
    }
}
