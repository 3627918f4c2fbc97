//! Line-oriented model files.
//!
//! ```text
//! # comment
//! kind probability|kappa|possibility
//! model vn|ug|dag|dbg|rcg
//! var NAME SIZE
//! val NAME v1 v2 ...                      (vn, plain node)
//! cond NAME head h1 ... tail t1 ...       (vn, conditional node)
//! edge A B                                (ug, rcg)
//! arc A B                                 (dag, rcg; A -> B)
//! balloon NAME m1 ... parents p1 ...      (dbg)
//! exo A                                   (rcg)
//! table NODE x1 x2 ...
//! ```
//!
//! A node's table is laid out row-major over its variables taken in `var`
//! declaration order, last variable fastest. Either every node has a table
//! or none does. Graph models name their nodes as the converters do.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::algebra::{AlgebraKind, Domain, Table, Valuation, VarSet, Variable};
use crate::converters::{self, Balloon, BalloonGraph, Dag, RecursiveCausalGraph, UndirectedGraph};
use crate::error::{Error, Result};
use crate::network::{ValuationNetwork, ValuationNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Vn,
    Ug,
    Dag,
    Dbg,
    Rcg,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Vn => "vn",
            ModelKind::Ug => "ug",
            ModelKind::Dag => "dag",
            ModelKind::Dbg => "dbg",
            ModelKind::Rcg => "rcg",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "vn" => ModelKind::Vn,
            "ug" => ModelKind::Ug,
            "dag" => ModelKind::Dag,
            "dbg" => ModelKind::Dbg,
            "rcg" => ModelKind::Rcg,
            _ => return None,
        })
    }

    fn allows(self, directive: &str) -> bool {
        matches!(
            (self, directive),
            (_, "var" | "table")
                | (ModelKind::Vn, "val" | "cond")
                | (ModelKind::Ug, "edge")
                | (ModelKind::Dag, "arc")
                | (ModelKind::Dbg, "balloon")
                | (ModelKind::Rcg, "exo" | "edge" | "arc")
        )
    }
}

/// The structural part of a model file.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// A structure-only network.
    Vn(ValuationNetwork),
    Ug(UndirectedGraph),
    Dag(Dag),
    Dbg(BalloonGraph),
    Rcg(RecursiveCausalGraph),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Vn(_) => ModelKind::Vn,
            Model::Ug(_) => ModelKind::Ug,
            Model::Dag(_) => ModelKind::Dag,
            Model::Dbg(_) => ModelKind::Dbg,
            Model::Rcg(_) => ModelKind::Rcg,
        }
    }

    pub fn variables(&self) -> &[Variable] {
        match self {
            Model::Vn(n) => n.variables(),
            Model::Ug(g) => g.vars(),
            Model::Dag(g) => g.vars(),
            Model::Dbg(g) => g.vars(),
            Model::Rcg(g) => g.vars(),
        }
    }

    /// The network without tables.
    pub fn structure(&self) -> Result<ValuationNetwork> {
        match self {
            Model::Vn(n) => Ok(n.clone()),
            Model::Ug(g) => converters::from_ug(g),
            Model::Dag(g) => converters::from_dag(g),
            Model::Dbg(g) => converters::from_dbg(g),
            Model::Rcg(g) => converters::from_rcg(g),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelFile {
    pub kind: AlgebraKind,
    pub model: Model,
    /// Tables by node name; empty for structure-only models.
    pub tables: BTreeMap<String, Table>,
    /// The text the model was parsed from, if any.
    pub source: String,
}

impl PartialEq for ModelFile {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.model == other.model && self.tables == other.tables
    }
}

impl ModelFile {
    /// Captures a network as a `vn` model, keeping its tables.
    pub fn from_network(network: &ValuationNetwork) -> Self {
        let tables = network
            .nodes()
            .iter()
            .filter_map(|n| n.table().map(|t| (n.name().to_string(), t.table().clone())))
            .collect();
        Self {
            kind: network.kind().unwrap_or(AlgebraKind::Probability),
            model: Model::Vn(network.structure()),
            tables,
            source: String::new(),
        }
    }

    pub fn has_tables(&self) -> bool {
        !self.tables.is_empty()
    }

    pub fn dag(&self) -> Option<&Dag> {
        match &self.model {
            Model::Dag(g) => Some(g),
            _ => None,
        }
    }

    /// The network with tables attached and validated.
    pub fn to_network(&self) -> Result<ValuationNetwork> {
        let structure = self.model.structure()?;
        if self.tables.is_empty() {
            return Ok(structure);
        }
        if let Some(name) = self.tables.keys().find(|k| structure.node(k).is_none()) {
            return Err(Error::Domain(format!("table for unknown node {name}")));
        }
        let nodes = structure
            .nodes()
            .iter()
            .map(|node| {
                let table = self.tables.get(node.name()).ok_or_else(|| Error::StructureOnly(node.name().to_string()))?;
                let expected = node.domain().size();
                if table.len() != expected {
                    return Err(Error::TableLength { node: node.name().to_string(), expected, found: table.len() });
                }
                let valuation = Valuation::new(self.kind, node.domain().clone(), table.clone())?;
                node.clone().with_table(valuation)
            })
            .collect::<Result<Vec<_>>>()?;
        ValuationNetwork::build(structure.variables().to_vec(), nodes)
    }

    /// Canonical text form; `parse_model(&m.serialize())` equals `m`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind {}", self.kind);
        let _ = writeln!(out, "model {}", self.model.kind().as_str());
        for v in self.model.variables() {
            let _ = writeln!(out, "var {} {}", v.name(), v.frame_size());
        }
        let join = |it: &mut dyn Iterator<Item = &str>| it.fold(String::new(), |acc, s| acc + " " + s);
        match &self.model {
            Model::Vn(net) => {
                for n in net.nodes() {
                    if n.is_conditional() {
                        let head = join(&mut n.head().iter().map(String::as_str));
                        let tail = n.tail();
                        let tail = join(&mut tail.iter().map(String::as_str));
                        let _ = writeln!(out, "cond {} head{head} tail{tail}", n.name());
                    } else {
                        let _ = writeln!(out, "val {}{}", n.name(), join(&mut n.domain().names()));
                    }
                }
            }
            Model::Ug(g) => {
                for (a, b) in g.edges() {
                    let _ = writeln!(out, "edge {a} {b}");
                }
            }
            Model::Dag(g) => {
                for (a, b) in g.arcs() {
                    let _ = writeln!(out, "arc {a} {b}");
                }
            }
            Model::Dbg(g) => {
                for b in g.balloons() {
                    let members = join(&mut b.members.iter().map(String::as_str));
                    let parents = join(&mut b.parents.iter().map(String::as_str));
                    let _ = writeln!(out, "balloon {}{members} parents{parents}", b.name);
                }
            }
            Model::Rcg(g) => {
                for x in g.exogenous() {
                    let _ = writeln!(out, "exo {x}");
                }
                for (a, b) in g.edges() {
                    let _ = writeln!(out, "edge {a} {b}");
                }
                for (a, b) in g.arcs() {
                    let _ = writeln!(out, "arc {a} {b}");
                }
            }
        }
        if self.has_tables() {
            let order: Vec<String> = match self.model.structure() {
                Ok(net) => net.nodes().iter().map(|n| n.name().to_string()).collect(),
                Err(_) => self.tables.keys().cloned().collect(),
            };
            for name in order {
                if let Some(t) = self.tables.get(&name) {
                    let _ = writeln!(out, "table {name} {}", t.format_entries());
                }
            }
        }
        out
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, msg: msg.into() }
}

struct Line<'a> {
    number: usize,
    directive: &'a str,
    args: Vec<&'a str>,
}

/// Splits `args` at `keyword`; the keyword itself may be absent.
fn split_at<'a>(args: &[&'a str], keyword: &str) -> (Vec<&'a str>, Vec<&'a str>) {
    match args.iter().position(|t| *t == keyword) {
        Some(i) => (args[..i].to_vec(), args[i + 1..].to_vec()),
        None => (args.to_vec(), Vec::new()),
    }
}

fn pair<'a>(l: &Line<'a>) -> Result<(&'a str, &'a str)> {
    match l.args[..] {
        [a, b] => Ok((a, b)),
        _ => Err(syntax(l.number, format!("{} needs exactly two variables", l.directive))),
    }
}

/// Domain over `names` in declaration order.
fn ordered_domain(vars: &[Variable], names: &[&str]) -> Result<Domain> {
    let mut set = VarSet::new();
    for n in names {
        if !vars.iter().any(|v| v.name() == *n) {
            return Err(Error::UnknownVariable(n.to_string()));
        }
        if !set.insert(n.to_string()) {
            return Err(Error::DuplicateVariable(n.to_string()));
        }
    }
    Domain::new(vars.iter().filter(|v| set.contains(v.name())).cloned().collect())
}

pub fn parse_model(text: &str) -> Result<ModelFile> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        if let Some(directive) = tokens.next() {
            lines.push(Line { number: i + 1, directive, args: tokens.collect() });
        }
    }
    let eof = text.lines().count().max(1);

    let mut kind = None;
    let mut model_kind = None;
    for l in &lines {
        match l.directive {
            "kind" | "model" => {
                let [value] = l.args[..] else {
                    return Err(syntax(l.number, format!("{} takes one argument", l.directive)));
                };
                if l.directive == "kind" {
                    if kind.is_some() {
                        return Err(syntax(l.number, "duplicate kind line"));
                    }
                    kind = Some(value.parse::<AlgebraKind>().map_err(|_| syntax(l.number, format!("unknown kind {value:?}")))?);
                } else {
                    if model_kind.is_some() {
                        return Err(syntax(l.number, "duplicate model line"));
                    }
                    model_kind = Some(ModelKind::parse(value).ok_or_else(|| syntax(l.number, format!("unknown model {value:?}")))?);
                }
            }
            "var" | "val" | "cond" | "edge" | "arc" | "balloon" | "exo" | "table" => {}
            other => return Err(syntax(l.number, format!("unknown directive {other:?}"))),
        }
    }
    let kind = kind.unwrap_or(AlgebraKind::Probability);
    let model_kind = model_kind.ok_or_else(|| syntax(eof, "missing model line"))?;

    let mut vars = Vec::new();
    let mut tables = BTreeMap::new();
    let mut body = Vec::new();
    for l in &lines {
        match l.directive {
            "kind" | "model" => {}
            d if !model_kind.allows(d) => {
                return Err(syntax(l.number, format!("{d} lines are not allowed in a {} model", model_kind.as_str())));
            }
            "var" => {
                let [name, size] = l.args[..] else {
                    return Err(syntax(l.number, "var takes a name and a frame size"));
                };
                let size: usize = size.parse().map_err(|_| syntax(l.number, format!("invalid frame size {size:?}")))?;
                vars.push(Variable::new(name, size)?);
            }
            "table" => {
                let Some((node, entries)) = l.args.split_first() else {
                    return Err(syntax(l.number, "table needs a node name"));
                };
                let table = Table::parse_entries(kind, entries.iter().copied()).map_err(|m| syntax(l.number, m))?;
                if tables.insert(node.to_string(), table).is_some() {
                    return Err(syntax(l.number, format!("duplicate table for {node}")));
                }
            }
            _ => body.push(l),
        }
    }
    Domain::new(vars.clone())?;

    let model = match model_kind {
        ModelKind::Vn => {
            let mut nodes = Vec::new();
            for l in body {
                let Some((name, rest)) = l.args.split_first() else {
                    return Err(syntax(l.number, format!("{} needs a node name", l.directive)));
                };
                if l.directive == "val" {
                    nodes.push(ValuationNode::plain(*name, ordered_domain(&vars, rest)?)?);
                } else {
                    if rest.first() != Some(&"head") {
                        return Err(syntax(l.number, "cond needs `head` after the node name"));
                    }
                    let (head, tail) = split_at(&rest[1..], "tail");
                    if head.is_empty() {
                        return Err(syntax(l.number, "cond needs at least one head variable"));
                    }
                    let all: Vec<&str> = head.iter().chain(&tail).copied().collect();
                    let head: VarSet = head.iter().map(|s| s.to_string()).collect();
                    nodes.push(ValuationNode::conditional(*name, ordered_domain(&vars, &all)?, head)?);
                }
            }
            Model::Vn(ValuationNetwork::build(vars, nodes)?)
        }
        ModelKind::Ug => {
            let edges = body.iter().map(|l| pair(l)).collect::<Result<Vec<_>>>()?;
            Model::Ug(UndirectedGraph::new(vars, edges)?)
        }
        ModelKind::Dag => {
            let arcs = body.iter().map(|l| pair(l)).collect::<Result<Vec<_>>>()?;
            Model::Dag(Dag::new(vars, arcs)?)
        }
        ModelKind::Dbg => {
            let mut balloons = Vec::new();
            for l in body {
                let Some((name, rest)) = l.args.split_first() else {
                    return Err(syntax(l.number, "balloon needs a name"));
                };
                let (members, parents) = split_at(rest, "parents");
                balloons.push(Balloon {
                    name: name.to_string(),
                    members: members.iter().map(|s| s.to_string()).collect(),
                    parents: parents.iter().map(|s| s.to_string()).collect(),
                });
            }
            Model::Dbg(BalloonGraph::new(vars, balloons)?)
        }
        ModelKind::Rcg => {
            let mut exo = VarSet::new();
            let mut edges = Vec::new();
            let mut arcs = Vec::new();
            for l in body {
                match l.directive {
                    "exo" => {
                        if l.args.is_empty() {
                            return Err(syntax(l.number, "exo needs at least one variable"));
                        }
                        exo.extend(l.args.iter().map(|s| s.to_string()));
                    }
                    "edge" => edges.push(pair(l)?),
                    _ => arcs.push(pair(l)?),
                }
            }
            Model::Rcg(RecursiveCausalGraph::new(vars, exo, edges, arcs)?)
        }
    };

    let file = ModelFile { kind, model, tables, source: text.to_string() };
    file.to_network()?;
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLED: &str = "\
kind probability
model vn
var U 2
var V 2
var W 2
var X 2
var Y 2
var Z 2
# rho is plain over U,V
val rho U V
cond alpha head W tail U
cond beta head X tail V W
cond gamma head Y tail W
cond delta head Z tail X Y
";

    #[test]
    fn parses_and_round_trips() {
        let m = parse_model(TABLED).unwrap();
        let net = m.to_network().unwrap();
        assert_eq!(net.nodes().len(), 5);
        assert_eq!(net.node("beta").unwrap().to_string(), "beta({X} | {V,W})");
        let again = parse_model(&m.serialize()).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.serialize(), m.serialize());
    }

    #[test]
    fn tables_follow_declaration_order() {
        let text = "kind probability\nmodel vn\nvar A 2\nvar B 2\nval f B A\ntable f 1 2 3 4\n";
        let net = parse_model(text).unwrap().to_network().unwrap();
        let t = net.node("f").unwrap().table().unwrap();
        assert_eq!(t.domain().names().collect::<Vec<_>>(), vec!["A", "B"]);
        assert_eq!(t.real_at(&[0, 1]), Some(2.0));
    }

    #[test]
    fn wrong_table_length_names_the_node() {
        let text = "model vn\nvar A 2\nval f A\ntable f 0.5 0.25 0.25\n";
        match parse_model(text) {
            Err(Error::TableLength { node, expected: 2, found: 3 }) => assert_eq!(node, "f"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let cases = [
            ("model vn\nvar A two\n", 2),
            ("model vn\n\nfrobnicate\n", 3),
            ("model dag\nvar A 2\nedge A A\n", 3),
            ("var A 2\n", 1),
            ("model vn\nvar A 2\nval f A\ntable f 0.5 x\n", 4),
            ("model vn\nmodel ug\n", 2),
        ];
        for (text, line) in cases {
            match parse_model(text) {
                Err(Error::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn semantic_errors_surface() {
        assert!(matches!(parse_model("model dag\nvar A 2\nvar B 2\narc A B\narc B A\n"), Err(Error::Graph(_))));
        assert!(matches!(parse_model("model vn\nvar A 2\nval f B\n"), Err(Error::UnknownVariable(_))));
        assert!(matches!(
            parse_model("model vn\nvar A 2\nval f A\nval g A\ntable f 1 1\n"),
            Err(Error::StructureOnly(n)) if n == "g"
        ));
        assert!(matches!(
            parse_model("model vn\nvar A 2\ncond f head A\ntable f 0.5 0.6\n"),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn graph_models_round_trip() {
        let texts = [
            "kind kappa\nmodel dag\nvar A 2\nvar B 3\narc A B\ntable A 0 1\ntable B 0 1 inf 2 0 5\n",
            "model ug\nvar A 2\nvar B 2\nvar C 2\nedge A B\nedge C B\n",
            "model dbg\nvar A 2\nvar B 2\nvar C 2\nballoon top A B\nballoon low C parents A\n",
            "model rcg\nvar A 2\nvar B 2\nvar C 2\nexo A B\nedge A B\narc B C\n",
        ];
        for text in texts {
            let m = parse_model(text).unwrap();
            assert_eq!(parse_model(&m.serialize()).unwrap(), m, "{text}");
        }
    }
}
