//! Graphviz export: variables as circles, valuation nodes as diamonds.

use std::fmt::Write as _;

use crate::network::ValuationNetwork;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Edges are drawn undirected; arcs point from a conditional to its head.
/// Node identifiers are prefixed (`v:` / `n:`) so names never collide.
pub fn to_dot(network: &ValuationNetwork) -> String {
    let mut out = String::from("graph vn {\n");
    for v in network.variables() {
        let _ = writeln!(out, "  {} [label={}, shape=circle];", quote(&format!("v:{}", v.name())), quote(v.name()));
    }
    for n in network.nodes() {
        let _ = writeln!(out, "  {} [label={}, shape=diamond];", quote(&format!("n:{}", n.name())), quote(n.name()));
    }
    for (node, var) in network.edges() {
        let _ = writeln!(out, "  {} -- {} [dir=none];", quote(&format!("n:{node}")), quote(&format!("v:{var}")));
    }
    for (node, var) in network.arcs() {
        let _ = writeln!(out, "  {} -- {} [dir=forward];", quote(&format!("n:{node}")), quote(&format!("v:{var}")));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{var_set, Domain, Variable};
    use crate::network::ValuationNode;

    #[test]
    fn small_network() {
        let vars = vec![Variable::binary("A").unwrap(), Variable::binary("B").unwrap()];
        let dom = Domain::new(vars.clone()).unwrap();
        let net = ValuationNetwork::build(vars, vec![ValuationNode::conditional("f", dom, var_set(["B"])).unwrap()]).unwrap();
        let dot = to_dot(&net);
        assert!(dot.contains("\"v:A\" [label=\"A\", shape=circle];"));
        assert!(dot.contains("\"n:f\" [label=\"f\", shape=diamond];"));
        assert!(dot.contains("\"n:f\" -- \"v:A\" [dir=none];"));
        assert!(dot.contains("\"n:f\" -- \"v:B\" [dir=forward];"));
        assert!(dot.starts_with("graph vn {\n") && dot.ends_with("}\n"));
    }
}
