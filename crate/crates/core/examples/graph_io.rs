//! Reading and writing graphs as graph6 strings and edge lists.
//!
//! Run with `cargo run --example graph_io`.

use rigidity::graphcore::{named, parse_edge_list, parse_graph6, to_edge_list, to_graph6};
use rigidity::pipeline::parse_graph_text;

fn main() -> rigidity::Result<()> {
    let petersen = named::petersen();
    let code = to_graph6(&petersen);
    println!("Petersen as graph6: {code}");
    assert_eq!(parse_graph6(&code)?, petersen);

    let text = to_edge_list(&named::cycle(5));
    println!("C5 as edge list:\n{text}");
    let c5 = parse_edge_list(&text)?;
    println!(
        "parsed back: n={} |E|={} regular degree={:?}",
        c5.n(),
        c5.m(),
        c5.regular_degree()
    );

    for input in ["IheA@GUAo", "# triangle\n0 1\n1 2\n2 0\n"] {
        let g = parse_graph_text(input)?;
        println!(
            "auto-detected input {:?}: n={} |E|={}",
            input.lines().next().unwrap_or(""),
            g.n(),
            g.m()
        );
    }

    for bad in ["0 1\n2 3\n", "0 0\n", "~~~~"] {
        match parse_graph_text(bad) {
            Ok(g) => println!("{bad:?} parsed unexpectedly as n={}", g.n()),
            Err(e) => println!("{bad:?} rejected: {e}"),
        }
    }
    Ok(())
}
