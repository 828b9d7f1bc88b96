//! The line-oriented graph file format.
//!
//! ```text
//! # comment
//! vertex <id> [loop] [alpha="<expr>"] [beta="<expr>"]
//! edge <id> <id>
//! root <id>
//! order <parent> <child>...
//! ```
//!
//! Ids must be declared before use, vertices are unique, and self-edges are
//! rejected (loops only via the `loop` flag). Weight expressions use the
//! polynomial expression grammar.

use interlace_core::poly::{Poly, PolyError};
use interlace_core::WeightedGraph;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileError {
    /// Malformed syntax; reported as `line:col: message`.
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    /// Well-formed but meaningless: unknown vertex, duplicate, self-edge...
    Semantic { line: usize, message: String },
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Parse { line, col, message } => {
                write!(f, "{line}:{col}: {message}")
            }
            FileError::Semantic { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GraphFileData {
    pub graph: WeightedGraph,
    pub root: Option<String>,
    pub orders: Vec<(String, Vec<String>)>,
}

/// One whitespace-separated token, except that `key="..."` runs to the
/// closing quote (expressions may contain spaces).
struct Token {
    text: String,
    col: usize,
}

fn tokenize(line_no: usize, line: &str) -> Result<Vec<Token>, FileError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let mut text = String::new();
        let mut in_quotes = false;
        while i < chars.len() && (in_quotes || !chars[i].is_whitespace()) {
            if chars[i] == '"' {
                in_quotes = !in_quotes;
            }
            text.push(chars[i]);
            i += 1;
        }
        if in_quotes {
            return Err(FileError::Parse {
                line: line_no,
                col: start + 1,
                message: "unterminated quote".to_string(),
            });
        }
        tokens.push(Token {
            text,
            col: start + 1,
        });
    }
    Ok(tokens)
}

fn parse_weight(line: usize, tok: &Token, key: &str) -> Result<Option<Poly>, FileError> {
    let prefix = format!("{key}=\"");
    let Some(rest) = tok.text.strip_prefix(&prefix) else {
        return Ok(None);
    };
    let Some(expr) = rest.strip_suffix('"') else {
        return Err(FileError::Parse {
            line,
            col: tok.col,
            message: format!("{key} expression is missing the closing quote"),
        });
    };
    let expr_col = tok.col + prefix.chars().count();
    Poly::parse(expr).map(Some).map_err(|e| match e {
        PolyError::Syntax { pos, message } => FileError::Parse {
            line,
            col: expr_col + pos,
            message,
        },
        PolyError::BadExponent { pos } => FileError::Parse {
            line,
            col: expr_col + pos,
            message: "exponent must be a nonnegative integer literal".to_string(),
        },
        other => FileError::Parse {
            line,
            col: expr_col,
            message: other.to_string(),
        },
    })
}

pub fn parse_graph_file(text: &str) -> Result<GraphFileData, FileError> {
    let mut data = GraphFileData::default();
    let mut root_line = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens = tokenize(line_no, raw)?;
        let semantic = |message: String| FileError::Semantic {
            line: line_no,
            message,
        };
        match tokens[0].text.as_str() {
            "vertex" => {
                let Some(id) = tokens.get(1) else {
                    return Err(FileError::Parse {
                        line: line_no,
                        col: tokens[0].col,
                        message: "vertex needs an id".to_string(),
                    });
                };
                let mut looped = false;
                let mut alpha = Poly::one();
                let mut beta = Poly::one();
                for tok in &tokens[2..] {
                    if tok.text == "loop" {
                        looped = true;
                    } else if let Some(p) = parse_weight(line_no, tok, "alpha")? {
                        alpha = p;
                    } else if let Some(p) = parse_weight(line_no, tok, "beta")? {
                        beta = p;
                    } else {
                        return Err(FileError::Parse {
                            line: line_no,
                            col: tok.col,
                            message: format!("unknown vertex attribute `{}`", tok.text),
                        });
                    }
                }
                data.graph
                    .add_vertex_weighted(&id.text, looped, alpha, beta)
                    .map_err(|e| semantic(e.to_string()))?;
            }
            "edge" => {
                let (Some(u), Some(v)) = (tokens.get(1), tokens.get(2)) else {
                    return Err(FileError::Parse {
                        line: line_no,
                        col: tokens[0].col,
                        message: "edge needs two vertex ids".to_string(),
                    });
                };
                if tokens.len() > 3 {
                    return Err(FileError::Parse {
                        line: line_no,
                        col: tokens[3].col,
                        message: "trailing tokens after edge".to_string(),
                    });
                }
                data.graph
                    .add_edge(&u.text, &v.text)
                    .map_err(|e| semantic(e.to_string()))?;
            }
            "root" => {
                let Some(id) = tokens.get(1) else {
                    return Err(FileError::Parse {
                        line: line_no,
                        col: tokens[0].col,
                        message: "root needs a vertex id".to_string(),
                    });
                };
                if data.graph.index_of(&id.text).is_none() {
                    return Err(semantic(format!("unknown vertex `{}`", id.text)));
                }
                if let Some(prev) = root_line {
                    return Err(semantic(format!(
                        "root was already declared on line {prev}"
                    )));
                }
                root_line = Some(line_no);
                data.root = Some(id.text.clone());
            }
            "order" => {
                if tokens.len() < 2 {
                    return Err(FileError::Parse {
                        line: line_no,
                        col: tokens[0].col,
                        message: "order needs a parent id".to_string(),
                    });
                }
                for tok in &tokens[1..] {
                    if data.graph.index_of(&tok.text).is_none() {
                        return Err(semantic(format!("unknown vertex `{}`", tok.text)));
                    }
                }
                data.orders.push((
                    tokens[1].text.clone(),
                    tokens[2..].iter().map(|t| t.text.clone()).collect(),
                ));
            }
            other => {
                return Err(FileError::Parse {
                    line: line_no,
                    col: tokens[0].col,
                    message: format!("unknown directive `{other}`"),
                });
            }
        }
    }
    Ok(data)
}

/// Canonical file text; parses back to an identical graph, root and orders.
pub fn serialize_graph(
    g: &WeightedGraph,
    root: Option<&str>,
    orders: &[(String, Vec<String>)],
) -> String {
    let mut out = String::new();
    for (i, label) in g.labels().iter().enumerate() {
        out.push_str("vertex ");
        out.push_str(label);
        if g.is_looped_at(i) {
            out.push_str(" loop");
        }
        if !g.alpha_at(i).is_one() {
            out.push_str(&format!(" alpha=\"{}\"", g.alpha_at(i)));
        }
        if !g.beta_at(i).is_one() {
            out.push_str(&format!(" beta=\"{}\"", g.beta_at(i)));
        }
        out.push('\n');
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    if let Some(r) = root {
        out.push_str(&format!("root {r}\n"));
    }
    for (p, kids) in orders {
        if !kids.is_empty() {
            out.push_str(&format!("order {p} {}\n", kids.join(" ")));
        }
    }
    out
}
