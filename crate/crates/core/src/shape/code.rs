//! Text formats for shapes: canonical codes, Newick and Graphviz DOT.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::{check_arity, Color, Plane, Shape};
use crate::error::{Error, Result};

/// Canonical text encoding over the alphabet `( ) o r`.
///
/// A white leaf is `o`, the red leaf `r`, and an internal node is `(`
/// followed by its children's codes in ascending byte order and `)`.
/// Two shapes are isomorphic iff their codes are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub(crate) fn from_shape(s: &Shape) -> Self {
        CanonicalCode(s.code().to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Parses the code back into a shape with arity bound `arity`.
    pub fn to_shape(&self, arity: usize) -> Result<Shape> {
        parse_code(&self.0, arity)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CanonicalCode {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Parses a code. Children may appear in any order; the result is
/// canonicalized. Surrounding whitespace is ignored.
pub fn parse_code(text: &str, arity: usize) -> Result<Shape> {
    check_arity(arity)?;
    let mut p = Parser::new(text.trim(), Syntax::Code);
    let plane = p.tree()?;
    p.finish()?;
    Ok(plane.canonicalize(arity)?.0)
}

/// Parses the Newick dialect produced by [`Shape::to_newick`]: white leaves
/// `x`, red leaf `R`, comma-separated children, optional trailing `;`.
pub fn parse_newick(text: &str, arity: usize) -> Result<Shape> {
    Ok(parse_newick_labeled(text, arity)?.0)
}

/// Newick parse that also reports, for each canonical leaf position, the
/// leaf's index in textual (left-to-right) order.
pub(crate) fn parse_newick_labeled(text: &str, arity: usize) -> Result<(Shape, Vec<usize>)> {
    check_arity(arity)?;
    let text = text.trim();
    let text = text.strip_suffix(';').unwrap_or(text).trim_end();
    let mut p = Parser::new(text, Syntax::Newick);
    let plane = p.tree()?;
    p.finish()?;
    plane.canonicalize(arity)
}

#[derive(Clone, Copy, PartialEq)]
enum Syntax {
    Code,
    Newick,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    syntax: Syntax,
    leaves: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, syntax: Syntax) -> Self {
        Parser { bytes: text.as_bytes(), pos: 0, syntax, leaves: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        if self.syntax == Syntax::Newick {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }
    }

    fn leaf(&mut self, color: Color) -> Plane<usize> {
        self.pos += 1;
        self.leaves += 1;
        Plane::Leaf(color, self.leaves - 1)
    }

    fn tree(&mut self) -> Result<Plane<usize>> {
        self.skip_ws();
        let Some(&b) = self.bytes.get(self.pos) else {
            return self.err("unexpected end of input");
        };
        match (self.syntax, b) {
            (Syntax::Code, b'o') | (Syntax::Newick, b'x') => Ok(self.leaf(Color::White)),
            (Syntax::Code, b'r') | (Syntax::Newick, b'R') => Ok(self.leaf(Color::Red)),
            (_, b'(') => {
                self.pos += 1;
                let mut children = Vec::new();
                loop {
                    children.push(self.tree()?);
                    self.skip_ws();
                    match (self.syntax, self.bytes.get(self.pos)) {
                        (_, Some(b')')) => {
                            self.pos += 1;
                            break;
                        }
                        (Syntax::Newick, Some(b',')) => self.pos += 1,
                        (Syntax::Code, Some(_)) => {}
                        (_, Some(&c)) => return self.err(format!("unexpected '{}'", c as char)),
                        (_, None) => return self.err("unclosed '('"),
                    }
                }
                if children.len() < 2 {
                    return self.err("internal node needs at least two children");
                }
                Ok(Plane::Node(children))
            }
            (_, c) => self.err(format!("unexpected '{}'", c as char)),
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return self.err("trailing input");
        }
        Ok(())
    }
}

impl Shape {
    /// Newick text: `x` for white leaves, `R` for the red leaf, children in
    /// canonical order, terminated by `;`.
    pub fn to_newick(&self) -> String {
        let mut out = String::with_capacity(2 * self.node_count() + 1);
        self.write_newick(&mut out);
        out.push(';');
        out
    }

    pub(crate) fn write_newick(&self, out: &mut String) {
        match self.color() {
            Some(Color::White) => out.push('x'),
            Some(Color::Red) => out.push('R'),
            None => {
                out.push('(');
                for (i, c) in self.children().iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.write_newick(out);
                }
                out.push(')');
            }
        }
    }

    /// Graphviz rendering: leaves as circles (the red leaf filled red), the
    /// root as a box, other internal vertices as points.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        let _ = writeln!(out, "  node [label=\"\", shape=circle, width=0.15];");
        let mut next = 0;
        self.write_dot(&mut out, "n", &mut next, true);
        out.push_str("}\n");
        out
    }

    /// Writes vertices and edges with ids `{prefix}{k}`; returns the root id.
    pub(crate) fn write_dot(&self, out: &mut String, prefix: &str, next: &mut usize, is_root: bool) -> usize {
        let id = *next;
        *next += 1;
        let fill = match self.color() {
            Some(Color::Red) => ", style=filled, fillcolor=red",
            Some(Color::White) => ", style=filled, fillcolor=white",
            None => "",
        };
        let shape = match (is_root, self.is_leaf()) {
            (true, _) => "box",
            (false, true) => "circle",
            (false, false) => "point",
        };
        let _ = writeln!(out, "  {prefix}{id} [shape={shape}{fill}];");
        for c in self.children() {
            let cid = c.write_dot(out, prefix, next, false);
            let _ = writeln!(out, "  {prefix}{id} -> {prefix}{cid} [arrowhead=none];");
        }
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::{caterpillar, BINARY};

    #[test]
    fn parse_examples() {
        assert_eq!(parse_code("(o(oo))", BINARY).unwrap(), caterpillar(3).unwrap());
        assert_eq!(parse_code("(oo)", BINARY).unwrap().code(), "(oo)");
        assert_eq!(parse_code(" ((oo)o) \n", BINARY).unwrap().code(), "((oo)o)");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_code("(o", BINARY), Err(Error::Parse { .. })));
        assert!(matches!(parse_code("(o)", BINARY), Err(Error::Parse { .. })));
        assert!(matches!(parse_code("(oo)o", BINARY), Err(Error::Parse { .. })));
        assert!(matches!(parse_code("(ox)", BINARY), Err(Error::Parse { .. })));
        assert!(matches!(parse_code("", BINARY), Err(Error::Parse { .. })));
        assert_eq!(parse_code("(rr)", BINARY), Err(Error::MultipleRedLeaves));
        assert_eq!(parse_code("((or)(or))", BINARY), Err(Error::MultipleRedLeaves));
        assert!(matches!(parse_code("(ooo)", BINARY), Err(Error::Arity { children: 3, arity: 2 })));
        assert_eq!(parse_code("(ooo)", 3).unwrap().arity(), 3);
        assert_eq!(parse_code("o", 1), Err(Error::InvalidArity(1)));
    }

    #[test]
    fn newick_roundtrip() {
        let s = parse_code("(r((oo)o))", BINARY).unwrap();
        assert_eq!(s.to_newick(), "(((x,x),x),R);");
        assert_eq!(parse_newick(&s.to_newick(), BINARY).unwrap(), s);
        assert_eq!(parse_newick(" ( x , (x,x) ) ", BINARY).unwrap(), caterpillar(3).unwrap());
        assert!(parse_newick("(x,y);", BINARY).is_err());
    }

    #[test]
    fn dot_marks_root_and_red() {
        let dot = parse_code("(or)", BINARY).unwrap().to_dot("t");
        assert!(dot.starts_with("digraph t {"));
        assert!(dot.contains("n0 [shape=box]"));
        assert!(dot.contains("fillcolor=red"));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
