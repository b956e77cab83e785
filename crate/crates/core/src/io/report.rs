//! Deterministic report text.
//!
//! A [`Report`] is an ordered list of lines. Each line is visible in the
//! human form, the `--machine` key=value form, or both.

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::derivation::RothsteinParts;
use crate::geometry::{GlobalVerdict, GlobalVectorField, SuperManifoldData};
use crate::grassmann::{ChartId, PullbackData};
use crate::lie::{GrComparison, HcPairReport, StructureConstants, SuperalgebraBasis};
use crate::scalar::{split_sign, GaussianRational};

use super::expr::print_superfunction;
use super::files::{write_manifold_file, write_pullback_file};

#[derive(Clone, Debug)]
enum Line {
    Text(String),
    Pair { key: String, label: String, value: String },
    Machine { key: String, value: String },
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    lines: Vec<Line>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Human form only.
    pub fn text(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(Line::Text(s.into()));
        self
    }

    /// `label: value` for humans, `key=value` for machines.
    pub fn pair(&mut self, key: &str, label: &str, value: impl ToString) -> &mut Self {
        self.lines.push(Line::Pair {
            key: key.into(),
            label: label.into(),
            value: value.to_string(),
        });
        self
    }

    /// Machine form only.
    pub fn machine(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.lines.push(Line::Machine {
            key: key.into(),
            value: value.to_string(),
        });
        self
    }

    pub fn append(&mut self, other: Report) -> &mut Self {
        self.lines.extend(other.lines);
        self
    }

    pub fn render(&self, machine: bool) -> String {
        let mut out = String::new();
        for l in &self.lines {
            match (l, machine) {
                (Line::Text(s), false) => writeln!(out, "{s}").unwrap(),
                (Line::Pair { label, value, .. }, false) => writeln!(out, "{label}: {value}").unwrap(),
                (Line::Pair { key, value, .. } | Line::Machine { key, value }, true) => {
                    writeln!(out, "{key}={value}").unwrap()
                }
                _ => {}
            }
        }
        out
    }
}

/// `2*b1 - 1/2*b3`, skipping zero coefficients.
pub fn format_combination(v: &[GaussianRational]) -> String {
    let mut s = String::new();
    for (i, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let (neg, mag) = split_sign(c);
        match (s.is_empty(), neg) {
            (true, true) => s.push('-'),
            (true, false) => {}
            (false, true) => s.push_str(" - "),
            (false, false) => s.push_str(" + "),
        }
        if !mag.is_one() {
            write!(s, "{mag}*").unwrap();
        }
        write!(s, "b{i}").unwrap();
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn parity_name(b: &SuperalgebraBasis, i: usize) -> &'static str {
    if i < b.dim_even() {
        "even"
    } else {
        "odd"
    }
}

fn field_text(g: &GlobalVectorField, chart: ChartId) -> String {
    match chart {
        ChartId::Zero => g.chart0.to_string_vars("z", "t"),
        ChartId::One => g.chart1.as_ref().map_or_else(|| "-".into(), |x| x.to_string_vars("w", "eta")),
    }
}

pub fn manifold_summary(m: &SuperManifoldData) -> Report {
    let mut r = Report::new();
    r.pair("manifold", "manifold", m.name());
    let kind = if m.is_odd_point() { 0 } else { 1 };
    r.pair("dimension", "dimension", format!("({kind}|{})", m.odd_dim()));
    r.pair("split", "split", m.is_split());
    r
}

pub fn basis_report(b: &SuperalgebraBasis) -> Report {
    let mut r = manifold_summary(&b.manifold);
    r.pair("cap", "cap", b.cap_used);
    r.pair("clearing_exponent", "clearing exponent", b.clearing_exponent);
    r.text(format!("even: {}, odd: {}", b.dim_even(), b.dim_odd()));
    r.machine("dim_even", b.dim_even()).machine("dim_odd", b.dim_odd());
    for (i, g) in b.elements().enumerate() {
        r.text(format!("b{i} ({}) = {}", parity_name(b, i), field_text(g, ChartId::Zero)));
        r.machine(format!("b{i}.parity"), parity_name(b, i));
        r.machine(format!("b{i}.chart0"), field_text(g, ChartId::Zero));
        if g.chart1.is_some() {
            r.machine(format!("b{i}.chart1"), field_text(g, ChartId::One));
        }
    }
    r
}

/// Nonzero brackets `[b_i, b_j]` with `i <= j`, then the Jacobi verdict.
pub fn brackets_report(s: &StructureConstants, jacobi: bool) -> Report {
    let mut r = Report::new();
    r.pair("dim", "dimension", s.dim());
    let mut nonzero = 0usize;
    for i in 0..s.dim() {
        for j in i..s.dim() {
            let v = &s.table[i][j];
            if v.iter().all(|c| c.is_zero()) {
                continue;
            }
            nonzero += 1;
            let combo = format_combination(v);
            r.text(format!("[b{i}, b{j}] = {combo}"));
            r.machine(format!("bracket.{i}.{j}"), combo);
        }
    }
    r.pair("nonzero_brackets", "nonzero brackets", nonzero);
    r.pair("jacobi", "jacobi", if jacobi { "ok" } else { "FAILED" });
    r
}

pub fn gr_report(gr: &SuperManifoldData, cmp: &GrComparison) -> Report {
    let mut r = Report::new();
    for line in write_manifold_file(gr).lines() {
        r.text(line);
    }
    if let Some(chi) = gr.transition() {
        r.machine("gr.w", print_superfunction(chi.even_image()));
        for (j, f) in chi.odd_images().iter().enumerate() {
            r.machine(format!("gr.eta{}", j + 1), print_superfunction(f));
        }
    }
    r.text("");
    r.text(format!("Vec(M): even {}, odd {}", cmp.dims.0, cmp.dims.1));
    r.text(format!("Vec(gr M): even {}, odd {}", cmp.gr_dims.0, cmp.gr_dims.1));
    r.machine("dim_even", cmp.dims.0).machine("dim_odd", cmp.dims.1);
    r.machine("gr_dim_even", cmp.gr_dims.0).machine("gr_dim_odd", cmp.gr_dims.1);
    r.pair("inequality", "dim Vec(M) <= dim Vec(gr M)", cmp.inequality_holds);
    r.pair("split", "split", cmp.split);
    r
}

pub fn weights_report(cartan: &[GaussianRational], weights: &[(GaussianRational, usize)]) -> Report {
    let mut r = Report::new();
    r.pair("cartan", "cartan", format_combination(cartan));
    r.text("weight  multiplicity");
    for (i, (w, m)) in weights.iter().enumerate() {
        r.text(format!("{:<7} {m}", w.to_string()));
        r.machine(format!("weight.{i}"), w).machine(format!("multiplicity.{i}"), m);
    }
    r.pair("odd_dim", "total", weights.iter().map(|(_, m)| m).sum::<usize>());
    r
}

pub fn pullback_report(p: &PullbackData) -> Report {
    let mut r = Report::new();
    for line in write_pullback_file(p).lines() {
        r.text(line);
    }
    let show = |f: &crate::grassmann::SuperFunction| print_superfunction(&f.relabel(ChartId::Zero));
    r.machine("z", show(p.even_image()));
    for (j, f) in p.odd_images().iter().enumerate() {
        r.machine(format!("t{}", j + 1), show(f));
    }
    r
}

pub fn decomposition_report(parts: &RothsteinParts) -> Report {
    let mut r = Report::new();
    r.text("# degree-preserving part");
    let p = &parts.degree_zero;
    for line in write_pullback_file(p).lines() {
        r.text(line);
    }
    let show = |f: &crate::grassmann::SuperFunction| print_superfunction(&f.relabel(ChartId::Zero));
    r.machine("phi0.z", show(p.even_image()));
    for (j, f) in p.odd_images().iter().enumerate() {
        r.machine(format!("phi0.t{}", j + 1), show(f));
    }
    r.text("");
    r.pair(
        "generator",
        "nilpotent generator Y",
        parts.nilpotent_generator.relabel(ChartId::Zero).to_string_vars("z", "t"),
    );
    r
}

pub fn verdict_report(v: GlobalVerdict) -> Report {
    let mut r = Report::new();
    r.pair("pullback", "pullback", v.as_str());
    r
}

pub fn hc_report(m: &SuperManifoldData, h: &HcPairReport) -> Report {
    let mut r = Report::new();
    r.text("== manifold ==");
    for line in write_manifold_file(m).lines() {
        r.text(line);
    }
    r.text("");
    r.text("== Vec(M) ==");
    r.append(basis_report(h.basis()));
    r.text("");
    r.text("== structure constants ==");
    r.append(brackets_report(&h.constants, h.jacobi));
    r.text("");
    r.text("== verdicts ==");
    r.pair("derived_span_dim", "dim [Vec1, Vec1]", h.derived_span_dim);
    r.pair("split_supergroup", "[Vec1, Vec1] = 0", h.split_supergroup);
    r.pair("ker_psi_dim", "dim Lie(ker Psi)", h.ker_psi_dim);
    let commutes = h.ker_psi_commutes_with_sl2.map_or("n/a".to_string(), |b| b.to_string());
    r.pair("ker_psi_commutes_with_sl2", "Lie(ker Psi) commutes with sl2", commutes);
    r.pair("gr_dim_even", "dim Vec0(gr M)", h.gr.gr_dims.0);
    r.pair("gr_dim_odd", "dim Vec1(gr M)", h.gr.gr_dims.1);
    r.pair("gr_inequality", "dim Vec(M) <= dim Vec(gr M)", h.gr.inequality_holds);
    r.pair("conjugation.witnesses", "conjugation witnesses", &h.conjugation.witnesses);
    r.pair("conjugation.parity_preserving", "conjugation preserves parity", h.conjugation.parity_preserving);
    r.pair("conjugation.multiplicative", "conjugation is multiplicative", h.conjugation.multiplicative);
    r.pair("conjugation.brackets_preserved", "conjugation preserves brackets", h.conjugation.brackets_preserved);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_text() {
        let g = GaussianRational::from_int;
        assert_eq!(format_combination(&[g(0), g(2), g(-1), GaussianRational::ratio(-1, 2)]), "2*b1 - b2 - 1/2*b3");
        assert_eq!(format_combination(&[g(-1), GaussianRational::i()]), "-b0 + i*b1");
        assert_eq!(format_combination(&[g(0)]), "0");
    }

    #[test]
    fn two_renderings() {
        let mut r = Report::new();
        r.text("hello").pair("a_b", "a b", 3).machine("hidden", "x");
        assert_eq!(r.render(false), "hello\na b: 3\n");
        assert_eq!(r.render(true), "a_b=3\nhidden=x\n");
    }
}
