//! Text artifacts: DOT, GraphML and CSV, each carrying the run manifest.
//!
//! Manifest lines are `key=value` pairs in the comment syntax of the format
//! (`# ` for CSV, `// ` for DOT, `<!-- -->` for GraphML).

use std::fmt::Write;

use crate::cayley::CayleyBall;
use crate::coned::{ConedBall, ConedVertex};
use crate::cusped::{CuspedBall, CuspedVertex};
use crate::error::{Error, Result};
use crate::word::Letter;

pub type Manifest = Vec<(String, String)>;

fn comment_lines(manifest: &Manifest, open: &str, close: &str) -> String {
    let mut out = String::new();
    for (k, v) in manifest {
        let v = v.replace('\n', " ");
        let _ = writeln!(out, "{open}{k}={v}{close}");
    }
    out
}

/// Comma-separated table with `# key=value` lines, a header row and LF endings.
pub fn csv_text(manifest: &Manifest, header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Invariant(format!("csv writer: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Invariant(format!(
                "csv row has {} fields for {} columns",
                row.len(),
                header.len()
            )));
        }
        w.write_record(row).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| Error::Invariant(format!("csv writer: {e}")))?;
    let mut out = comment_lines(manifest, "# ", "");
    out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
    Ok(out)
}

fn quote(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Undirected labelled edges, each once, from positive letters.
fn labelled_edges(ball: &CayleyBall) -> Vec<(usize, usize, Letter)> {
    let mut out = Vec::new();
    for i in 0..ball.len() {
        for (l, j) in ball.neighbors(i) {
            if !l.is_inverse() {
                out.push((i, j, l));
            }
        }
    }
    out
}

pub fn cayley_dot(ball: &CayleyBall, manifest: &Manifest) -> String {
    let g = ball.group();
    let mut out = comment_lines(manifest, "// ", "");
    out.push_str("digraph cayley {\n");
    for (i, e) in ball.elements().iter().enumerate() {
        let _ = writeln!(out, "  {i} [label=\"{}\", length={}];", quote(&g.render(e)), ball.length(i));
    }
    for (i, j, l) in labelled_edges(ball) {
        let _ = writeln!(out, "  {i} -> {j} [label=\"{}\"];", quote(&l.render(g.names())));
    }
    out.push_str("}\n");
    out
}

pub fn cayley_graphml(ball: &CayleyBall, manifest: &Manifest) -> String {
    let g = ball.group();
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    for (k, v) in manifest {
        let _ = writeln!(out, "<!-- {}={} -->", xml_escape(k), xml_escape(v).replace("--", "- -"));
    }
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"element\" for=\"node\" attr.name=\"element\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"length\" for=\"node\" attr.name=\"length\" attr.type=\"int\"/>\n");
    out.push_str("  <key id=\"generator\" for=\"edge\" attr.name=\"generator\" attr.type=\"string\"/>\n");
    out.push_str("  <graph id=\"cayley\" edgedefault=\"directed\">\n");
    for (i, e) in ball.elements().iter().enumerate() {
        let _ = writeln!(
            out,
            "    <node id=\"n{i}\"><data key=\"element\">{}</data><data key=\"length\">{}</data></node>",
            xml_escape(&g.render(e)),
            ball.length(i)
        );
    }
    for (k, (i, j, l)) in labelled_edges(ball).into_iter().enumerate() {
        let _ = writeln!(
            out,
            "    <edge id=\"e{k}\" source=\"n{i}\" target=\"n{j}\"><data key=\"generator\">{}</data></edge>",
            xml_escape(&l.render(g.names()))
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// Vertex table of a Cayley ball: id, element, word length, shortlex word.
pub fn cayley_csv(ball: &CayleyBall, manifest: &Manifest) -> Result<String> {
    let g = ball.group();
    let rows: Vec<Vec<String>> = (0..ball.len())
        .map(|i| {
            vec![
                i.to_string(),
                g.render(ball.element(i)),
                ball.length(i).to_string(),
                ball.element_ball().word(i).render(g.names()),
            ]
        })
        .collect();
    csv_text(manifest, &["id", "element", "length", "word"], &rows)
}

/// Cone points are drawn as boxes; cone edges are dashed.
pub fn coned_dot(coned: &ConedBall, manifest: &Manifest) -> String {
    let cayley = coned.cayley();
    let g = cayley.group();
    let mut out = comment_lines(manifest, "// ", "");
    out.push_str("graph coned {\n");
    for (i, e) in cayley.elements().iter().enumerate() {
        let _ = writeln!(out, "  {i} [label=\"{}\"];", quote(&g.render(e)));
    }
    for c in 0..coned.cone_count() {
        let id = coned.vertex_id(ConedVertex::Cone(crate::subgroup::CosetId(c)));
        let label = coned.coset_label(crate::subgroup::CosetId(c));
        let _ = writeln!(out, "  {id} [label=\"{}\", shape=box];", quote(&label));
    }
    for (i, j, l) in labelled_edges(cayley) {
        let _ = writeln!(out, "  {i} -- {j} [label=\"{}\"];", quote(&l.render(g.names())));
    }
    for c in 0..coned.cone_count() {
        let cid = crate::subgroup::CosetId(c);
        let id = coned.vertex_id(ConedVertex::Cone(cid));
        for &m in coned.members(cid) {
            let _ = writeln!(out, "  {m} -- {id} [style=dashed];");
        }
    }
    out.push_str("}\n");
    out
}

const DEPTH_COLORS: [&str; 8] = [
    "black", "blue", "green4", "orange", "red", "purple", "brown", "gray40",
];

/// Vertices are coloured by horoball depth.
pub fn cusped_dot(cusped: &CuspedBall, manifest: &Manifest) -> String {
    let g = cusped.group();
    let mut out = comment_lines(manifest, "// ", "");
    out.push_str("graph cusped {\n");
    for v in 0..cusped.vertex_count() {
        let base = g.render(cusped.cayley().element(cusped.base_of(v)));
        let depth = cusped.depth_of(v);
        let color = DEPTH_COLORS[depth.min(DEPTH_COLORS.len() - 1)];
        let _ = writeln!(
            out,
            "  {v} [label=\"{}@{depth}\", depth={depth}, color={color}];",
            quote(&base)
        );
    }
    for (u, v) in cusped.graph().edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

/// Vertex table of a cusped ball: id, base element, coset, depth.
pub fn cusped_csv(cusped: &CuspedBall, manifest: &Manifest) -> Result<String> {
    let g = cusped.group();
    let rows: Vec<Vec<String>> = (0..cusped.vertex_count())
        .map(|v| {
            let coset = match cusped.vertex(v) {
                CuspedVertex::Group(_) => String::new(),
                CuspedVertex::Horo { coset, .. } => coset.0.to_string(),
            };
            vec![
                v.to_string(),
                g.render(cusped.cayley().element(cusped.base_of(v))),
                coset,
                cusped.depth_of(v).to_string(),
            ]
        })
        .collect();
    csv_text(manifest, &["id", "base", "coset", "depth"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::MarkedGroup;

    #[test]
    fn csv_has_manifest_and_lf() {
        let m: Manifest = vec![("radius".into(), "2".into())];
        let t = csv_text(&m, &["n", "value"], &[vec!["1".into(), "a, b".into()]]).unwrap();
        assert_eq!(t, "# radius=2\nn,value\n1,\"a, b\"\n");
        assert!(csv_text(&m, &["n"], &[vec![]]).is_err());
    }

    #[test]
    fn dot_lists_every_edge_once() {
        let f2 = MarkedGroup::free(2);
        let b = CayleyBall::build(&f2, 2, 1000).unwrap();
        let dot = cayley_dot(&b, &Vec::new());
        assert_eq!(dot.matches("->").count(), 16);
        let gml = cayley_graphml(&b, &vec![("k".into(), "v".into())]);
        assert_eq!(gml.matches("<edge ").count(), 16);
        assert!(gml.contains("<!-- k=v -->"));
    }
}
