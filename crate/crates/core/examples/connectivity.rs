//! Strong connectivity and depth of a few digraphs.
//!
//! cargo run --example connectivity

use delayed_kuramoto::graph::{analyze_connectivity, DigraphTopology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chain = DigraphTopology::from_adjacency(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]])?;
    let graphs = [
        ("all-to-all, N = 6", DigraphTopology::all_to_all(6)?),
        ("ring, N = 10", DigraphTopology::ring(10)?),
        ("open chain, N = 3", chain.clone()),
        ("chain closed by one arc", chain.with_arc(0, 2)?),
    ];
    for (name, g) in &graphs {
        let report = analyze_connectivity(g);
        println!(
            "{name:<26} arcs {:>3}  strongly connected {:<5}  depth {}",
            g.arc_count(),
            report.strongly_connected,
            report.depth.map_or("-".into(), |d| d.to_string())
        );
    }
    Ok(())
}
