//! Operator-precedence parser for the expression grammar
//!
//! ```text
//! expr   := term { "+" term }
//! term   := factor { "*" factor }
//! factor := leaf | "(" expr ")"
//! leaf   := ident "->" ident      (esp)
//!         | ident                 (msp)
//! ident  := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Lines starting with `#` are comments. Parsing uses an explicit operator
//! stack, so nesting depth is not limited by the call stack.

use super::{Flavor, Node, SpExpression};
use crate::error::ExprError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Arrow,
    Plus,
    Star,
    Open,
    Close,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ExprError {
    ExprError::Syntax { line: pos.line, column: pos.column, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ExprError> {
    let mut toks = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let pos = Pos { line: ln + 1, column: i + 1 };
            let c = chars[i];
            match c {
                c if c.is_whitespace() => i += 1,
                '+' => {
                    toks.push((Tok::Plus, pos));
                    i += 1;
                }
                '*' => {
                    toks.push((Tok::Star, pos));
                    i += 1;
                }
                '(' => {
                    toks.push((Tok::Open, pos));
                    i += 1;
                }
                ')' => {
                    toks.push((Tok::Close, pos));
                    i += 1;
                }
                '-' if chars.get(i + 1) == Some(&'>') => {
                    toks.push((Tok::Arrow, pos));
                    i += 2;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                }
                other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
            }
        }
    }
    Ok(toks)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Open,
    Parallel,
    Series,
}

impl Op {
    fn precedence(self) -> u8 {
        match self {
            Op::Open => 0,
            Op::Parallel => 1,
            Op::Series => 2,
        }
    }
}

/// Parses `text` as an expression of the given flavor.
pub fn parse(text: &str, flavor: Flavor) -> Result<SpExpression, ExprError> {
    let toks = tokenize(text)?;
    let end = toks
        .last()
        .map(|&(_, p)| Pos { line: p.line, column: p.column + 1 })
        .unwrap_or(Pos { line: 1, column: 1 });
    let mut nodes: Vec<Node> = Vec::new();
    let mut operands: Vec<usize> = Vec::new();
    let mut ops: Vec<(Op, Pos)> = Vec::new();
    let mut expect_operand = true;

    let apply = |op: Op, nodes: &mut Vec<Node>, operands: &mut Vec<usize>| {
        let r = operands.pop().expect("operand stack");
        let l = operands.pop().expect("operand stack");
        nodes.push(match op {
            Op::Parallel => Node::Parallel(l, r),
            Op::Series => Node::Series(l, r),
            Op::Open => unreachable!(),
        });
        operands.push(nodes.len() - 1);
    };

    let mut i = 0;
    while i < toks.len() {
        let (tok, pos) = (&toks[i].0, toks[i].1);
        if expect_operand {
            match tok {
                Tok::Open => ops.push((Op::Open, pos)),
                Tok::Ident(name) => {
                    let is_arc = matches!(toks.get(i + 1), Some((Tok::Arrow, _)));
                    match (flavor, is_arc) {
                        (Flavor::Esp, true) => {
                            let Some((Tok::Ident(head), _)) = toks.get(i + 2) else {
                                let p = toks.get(i + 2).map(|t| t.1).unwrap_or(end);
                                return Err(syntax(p, "expected vertex name after `->`"));
                            };
                            nodes.push(Node::Arc { tail: name.clone(), head: head.clone() });
                            i += 2;
                        }
                        (Flavor::Msp, false) => nodes.push(Node::Vertex(name.clone())),
                        (Flavor::Esp, false) => return Err(ExprError::FlavorMismatch("vertex", "esp")),
                        (Flavor::Msp, true) => return Err(ExprError::FlavorMismatch("arc", "msp")),
                    }
                    operands.push(nodes.len() - 1);
                    expect_operand = false;
                }
                _ => return Err(syntax(pos, "expected a leaf or `(`")),
            }
        } else {
            match tok {
                Tok::Plus | Tok::Star => {
                    let op = if *tok == Tok::Plus { Op::Parallel } else { Op::Series };
                    while let Some(&(top, _)) = ops.last() {
                        if top != Op::Open && top.precedence() >= op.precedence() {
                            ops.pop();
                            apply(top, &mut nodes, &mut operands);
                        } else {
                            break;
                        }
                    }
                    ops.push((op, pos));
                    expect_operand = true;
                }
                Tok::Close => loop {
                    match ops.pop() {
                        Some((Op::Open, _)) => break,
                        Some((op, _)) => apply(op, &mut nodes, &mut operands),
                        None => return Err(syntax(pos, "unmatched `)`")),
                    }
                },
                _ => return Err(syntax(pos, "expected `+`, `*` or `)`")),
            }
        }
        i += 1;
    }
    if expect_operand {
        return Err(syntax(end, "unexpected end of input"));
    }
    while let Some((op, pos)) = ops.pop() {
        if op == Op::Open {
            return Err(syntax(pos, "unclosed `(`"));
        }
        apply(op, &mut nodes, &mut operands);
    }
    SpExpression::from_nodes(flavor, nodes)
}

/// Parses a fixture file whose first comment line declares the flavor,
/// e.g. `# flavor: esp`.
pub fn parse_fixture_file(text: &str) -> Result<SpExpression, ExprError> {
    let flavor = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|c| c.trim().strip_prefix("flavor:").map(|f| f.trim().to_string()))
        .ok_or_else(|| syntax(Pos { line: 1, column: 1 }, "missing `# flavor: esp|msp` header"))?;
    let flavor: Flavor = flavor.parse().map_err(|m: String| syntax(Pos { line: 1, column: 1 }, m))?;
    parse(text, flavor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let x = parse("v1->v2", Flavor::Esp).unwrap();
        assert_eq!(x.nodes(), &[Node::Arc { tail: "v1".into(), head: "v2".into() }]);
    }

    #[test]
    fn series_binds_tighter() {
        let x = parse("a + b * c", Flavor::Msp).unwrap();
        assert_eq!(
            x.nodes(),
            &[
                Node::Vertex("a".into()),
                Node::Vertex("b".into()),
                Node::Vertex("c".into()),
                Node::Series(1, 2),
                Node::Parallel(0, 3),
            ]
        );
    }

    #[test]
    fn x4_structure() {
        let x = parse("(v1 * ((v2*(v3*v4)) + v5)) * v6", Flavor::Msp).unwrap();
        assert_eq!(x.to_string(), "v1 * (v2 * (v3 * v4) + v5) * v6");
        assert!(matches!(x.nodes()[x.root()], Node::Series(_, _)));
        assert_eq!(x.leaf_count(), 6);
    }

    #[test]
    fn errors_carry_positions() {
        match parse("a +\n  * b", Flavor::Msp) {
            Err(ExprError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(a * b", Flavor::Msp), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("a * b)", Flavor::Msp), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("", Flavor::Msp), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("a $ b", Flavor::Msp), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("a->", Flavor::Esp), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn flavor_mismatch() {
        assert!(matches!(parse("a->b", Flavor::Msp), Err(ExprError::FlavorMismatch("arc", "msp"))));
        assert!(matches!(parse("a * b", Flavor::Esp), Err(ExprError::FlavorMismatch("vertex", "esp"))));
    }

    #[test]
    fn deep_nesting_does_not_recurse() {
        let depth = 100_000;
        let text = format!("{}a{}", "(".repeat(depth), ")".repeat(depth));
        let x = parse(&text, Flavor::Msp).unwrap();
        assert_eq!(x.leaf_count(), 1);
    }

    #[test]
    fn fixture_header() {
        let x = parse_fixture_file("# flavor: msp\na * b\n").unwrap();
        assert_eq!(x.flavor(), Flavor::Msp);
        assert!(parse_fixture_file("a * b").is_err());
    }
}
