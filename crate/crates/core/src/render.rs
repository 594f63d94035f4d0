//! Deterministic SVG emission for spider webs and partition diagrams.
//!
//! Axis 1 points to 12 o'clock and the axes proceed clockwise in class
//! order, 45° apart. Coordinates are written with three fractional digits
//! and axis directions come from a fixed table rather than `sin`/`cos`, so
//! output is byte-identical across runs and platforms.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write;

use thiserror::Error;

use crate::profile::SwsVector;
use crate::quotient::{CanonicalPartition, Intelligence, AXES};

/// Unit direction of each axis, y pointing up.
const DIRECTIONS: [(f64, f64); AXES] = [
    (0.0, 1.0),
    (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    (1.0, 0.0),
    (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    (0.0, -1.0),
    (-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    (-1.0, 0.0),
    (-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
];

const MIN_CANVAS: u32 = 100;
const GRID_RINGS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialScale {
    /// Vertex radius is `score / ideal` of the full radius.
    NormalizeByIdeal,
    /// Vertex radius is `score / max` of the full radius on every axis.
    FixedMax(u32),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PartitionLayout {
    /// Bare rays with their element dots.
    #[default]
    Axes,
    /// Rays plus threads joining the outermost dots of adjacent rays.
    Joined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderStyle {
    /// Width and height of the square canvas, in pixels. Default 480.
    pub canvas: u32,
    /// Default [`RadialScale::NormalizeByIdeal`].
    pub scale: RadialScale,
    /// Draw intelligence names next to the axes. Default on.
    pub axis_labels: bool,
    /// Stroke colors for overlaid member webs, cycled in order.
    pub palette: Vec<String>,
    /// Default [`PartitionLayout::Axes`].
    pub partition_layout: PartitionLayout,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            canvas: 480,
            scale: RadialScale::NormalizeByIdeal,
            axis_labels: true,
            palette: ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]
                .map(String::from)
                .to_vec(),
            partition_layout: PartitionLayout::Axes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("canvas must be at least {MIN_CANVAS}px, got {0}px")]
    CanvasTooSmall(u32),
    #[error("palette is empty but {0} webs are overlaid")]
    EmptyPalette(usize),
    #[error("score {score} on the {axis} axis exceeds the maximum {max}")]
    ExceedsMaximum {
        axis: Intelligence,
        score: u32,
        max: u32,
    },
    #[error("group web on the {axis} axis is {given}, but the member maximum is {expected}")]
    InconsistentGroupMax {
        axis: Intelligence,
        given: u32,
        expected: u32,
    },
    #[error("no member webs to overlay")]
    NoMembers,
}

/// Fixed three-decimal formatting without negative zero.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Frame {
    canvas: f64,
    center: f64,
    radius: f64,
}

impl Frame {
    fn new(style: &RenderStyle) -> Result<Self, RenderError> {
        if style.canvas < MIN_CANVAS {
            return Err(RenderError::CanvasTooSmall(style.canvas));
        }
        let canvas = f64::from(style.canvas);
        let margin = if style.axis_labels { 0.2 } else { 0.05 };
        Ok(Frame {
            canvas,
            center: canvas / 2.0,
            radius: canvas * (0.5 - margin),
        })
    }

    /// Point at `fraction` of the full radius along axis `slot`.
    fn point(&self, slot: usize, fraction: f64) -> (f64, f64) {
        let (ux, uy) = DIRECTIONS[slot];
        let r = self.radius * fraction;
        (self.center + r * ux, self.center - r * uy)
    }

    fn points_attr(&self, fractions: &[f64; AXES]) -> String {
        (0..AXES)
            .map(|s| {
                let (x, y) = self.point(s, fractions[s]);
                format!("{},{}", num(x), num(y))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn open(&self, out: &mut String, title: &str) {
        let size = num(self.canvas);
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\" data-center=\"{c}\" data-radius=\"{r}\">",
            c = num(self.center),
            r = num(self.radius),
        );
        let _ = writeln!(out, "<title>{}</title>", escape(title));
        let _ = writeln!(
            out,
            "<rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"#ffffff\"/>"
        );
    }

    fn axes(&self, out: &mut String) {
        out.push_str("<g class=\"axes\" stroke=\"#999999\" stroke-width=\"1\">\n");
        for s in 0..AXES {
            let (x, y) = self.point(s, 1.0);
            let _ = writeln!(
                out,
                "<line x1=\"{c}\" y1=\"{c}\" x2=\"{}\" y2=\"{}\"/>",
                num(x),
                num(y),
                c = num(self.center)
            );
        }
        out.push_str("</g>\n");
    }

    fn grid(&self, out: &mut String) {
        out.push_str("<g class=\"grid\" fill=\"none\" stroke=\"#dddddd\" stroke-width=\"1\">\n");
        for ring in 1..=GRID_RINGS {
            let f = f64::from(ring) / f64::from(GRID_RINGS);
            let _ = writeln!(out, "<polygon points=\"{}\"/>", self.points_attr(&[f; AXES]));
        }
        out.push_str("</g>\n");
        self.axes(out);
    }

    fn labels(&self, out: &mut String, text: impl Fn(Intelligence) -> String) {
        out.push_str(
            "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n",
        );
        for class in Intelligence::ALL {
            let s = class.slot();
            let (x, y) = self.point(s, 1.08);
            let (ux, _) = DIRECTIONS[s];
            let anchor = if ux > 0.1 {
                "start"
            } else if ux < -0.1 {
                "end"
            } else {
                "middle"
            };
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" dominant-baseline=\"middle\">{}</text>",
                num(x),
                num(y),
                escape(&text(class))
            );
        }
        out.push_str("</g>\n");
    }
}

fn fractions(sws: &SwsVector, ideal: &SwsVector, scale: RadialScale) -> Result<[f64; AXES], RenderError> {
    let mut out = [0.0; AXES];
    for class in Intelligence::ALL {
        let s = class.slot();
        let max = match scale {
            RadialScale::NormalizeByIdeal => ideal.0[s],
            RadialScale::FixedMax(m) => m,
        };
        let score = sws.0[s];
        if score > ideal.0[s] || score > max {
            return Err(RenderError::ExceedsMaximum {
                axis: class,
                score,
                max: max.min(ideal.0[s]),
            });
        }
        // 0/0 pins the vertex to the center
        out[s] = if max == 0 { 0.0 } else { f64::from(score) / f64::from(max) };
    }
    Ok(out)
}

fn web(out: &mut String, frame: &Frame, fractions: &[f64; AXES], class: &str, paint: &str) {
    let _ = writeln!(
        out,
        "<polygon class=\"{class}\" points=\"{}\" {paint}/>",
        frame.points_attr(fractions)
    );
}

fn vertices(out: &mut String, frame: &Frame, fractions: &[f64; AXES], color: &str) {
    let _ = writeln!(out, "<g class=\"vertices\" fill=\"{color}\">");
    for (s, f) in fractions.iter().enumerate() {
        let (x, y) = frame.point(s, *f);
        let _ = writeln!(
            out,
            "<circle class=\"vertex\" data-axis=\"{}\" data-ratio=\"{}\" cx=\"{}\" cy=\"{}\" r=\"3\"/>",
            s + 1,
            num(*f),
            num(x),
            num(y)
        );
    }
    out.push_str("</g>\n");
}

/// Single spider web: one vertex per axis, joined into a closed polygon.
pub fn render_sws(sws: &SwsVector, ideal: &SwsVector, style: &RenderStyle) -> Result<String, RenderError> {
    let frame = Frame::new(style)?;
    let fr = fractions(sws, ideal, style.scale)?;
    let mut out = String::new();
    frame.open(&mut out, &format!("Spider web {sws}"));
    frame.grid(&mut out);
    if style.axis_labels {
        frame.labels(&mut out, |c| format!("{} ({})", c.name(), sws[c]));
    }
    let color = style.palette.first().map_or("#1f77b4", String::as_str);
    web(
        &mut out,
        &frame,
        &fr,
        "sws",
        &format!("fill=\"{color}\" fill-opacity=\"0.25\" stroke=\"{color}\" stroke-width=\"2\""),
    );
    vertices(&mut out, &frame, &fr, color);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Member webs in palette order beneath the emphasized group web.
pub fn render_group(
    profiles: &[SwsVector],
    group_max: &SwsVector,
    ideal: &SwsVector,
    style: &RenderStyle,
) -> Result<String, RenderError> {
    let frame = Frame::new(style)?;
    if profiles.is_empty() {
        return Err(RenderError::NoMembers);
    }
    if style.palette.is_empty() && profiles.len() > 1 {
        return Err(RenderError::EmptyPalette(profiles.len()));
    }
    let expected = profiles.iter().fold(SwsVector::ZERO, |acc, p| acc.join(p));
    if let Some(axis) = Intelligence::ALL
        .into_iter()
        .find(|c| expected[*c] != group_max[*c])
    {
        return Err(RenderError::InconsistentGroupMax {
            axis,
            given: group_max[axis],
            expected: expected[axis],
        });
    }
    let member_fractions = profiles
        .iter()
        .map(|p| fractions(p, ideal, style.scale))
        .collect::<Result<Vec<_>, _>>()?;
    let group_fractions = fractions(group_max, ideal, style.scale)?;

    let mut out = String::new();
    frame.open(&mut out, &format!("Group web {group_max} over {} members", profiles.len()));
    frame.grid(&mut out);
    if style.axis_labels {
        frame.labels(&mut out, |c| format!("{} ({})", c.name(), group_max[c]));
    }
    out.push_str("<g class=\"members\">\n");
    for (i, fr) in member_fractions.iter().enumerate() {
        let color = style
            .palette
            .get(i % style.palette.len().max(1))
            .map_or("#1f77b4", String::as_str);
        web(
            &mut out,
            &frame,
            fr,
            "member",
            &format!("fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" stroke-dasharray=\"4 2\""),
        );
    }
    out.push_str("</g>\n");
    web(
        &mut out,
        &frame,
        &group_fractions,
        "group",
        "fill=\"#000000\" fill-opacity=\"0.12\" stroke=\"#000000\" stroke-width=\"3\"",
    );
    vertices(&mut out, &frame, &group_fractions, "#000000");
    out.push_str("</svg>\n");
    Ok(out)
}

/// Rays with one evenly spaced dot per reduced-class element. All rays share
/// the same tick spacing, set by the largest class.
pub fn render_partition(partition: &CanonicalPartition, style: &RenderStyle) -> Result<String, RenderError> {
    let frame = Frame::new(style)?;
    let sizes = partition.reduced_sizes();
    let ticks = sizes.iter().copied().max().unwrap_or(0).max(1) as f64;

    let mut out = String::new();
    let title = match style.partition_layout {
        PartitionLayout::Axes => "Reduced intelligence classes",
        PartitionLayout::Joined => "Union of the reduced classes",
    };
    frame.open(&mut out, title);
    frame.axes(&mut out);
    if style.axis_labels {
        frame.labels(&mut out, |c| format!("{} {} ({})", c.index(), c.name(), sizes[c.slot()]));
    }

    if style.partition_layout == PartitionLayout::Joined {
        let outer: [f64; AXES] = std::array::from_fn(|s| sizes[s] as f64 / ticks);
        web(
            &mut out,
            &frame,
            &outer,
            "web",
            "fill=\"none\" stroke=\"#555555\" stroke-width=\"1.5\"",
        );
    }

    for class in Intelligence::ALL {
        let s = class.slot();
        let color = style
            .palette
            .get(s % style.palette.len().max(1))
            .map_or("#1f77b4", String::as_str);
        let _ = writeln!(
            out,
            "<g class=\"ray\" data-axis=\"{}\" data-count=\"{}\" fill=\"{color}\">",
            class.index(),
            sizes[s]
        );
        for (i, x) in partition.reduced(class).iter().enumerate() {
            let (px, py) = frame.point(s, (i + 1) as f64 / ticks);
            let _ = writeln!(
                out,
                "<circle class=\"element\" cx=\"{}\" cy=\"{}\" r=\"3\"><title>{}</title></circle>",
                num(px),
                num(py),
                escape(x.as_str())
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
