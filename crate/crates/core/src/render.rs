//! Image and grid exports: diverging field maps and labeled nodal
//! decompositions as portable pixmaps, plus plain-text label grids.

use std::io::Write;
use std::path::Path;

use crate::geometry::{DiscreteDomain, NodeClass};
use crate::nodal::NodalDecomposition;
use crate::solver::ScalarField;

const EXTERIOR: [u8; 3] = [24, 24, 24];
const BOUNDARY: [u8; 3] = [128, 128, 128];
const ZERO: [u8; 3] = [255, 255, 255];

// warm palette for positive components, cool for negative; cycled by index
const WARM: [[u8; 3]; 5] = [
    [202, 0, 32],
    [244, 165, 130],
    [255, 120, 0],
    [180, 60, 40],
    [255, 200, 80],
];
const COOL: [[u8; 3]; 5] = [
    [5, 113, 176],
    [146, 197, 222],
    [60, 60, 200],
    [0, 160, 160],
    [120, 120, 255],
];

/// RGB raster of a scalar field: blue-white-red by sign, scaled by max|u|.
pub fn field_rgb(domain: &DiscreteDomain, u: &ScalarField) -> (usize, usize, Vec<u8>) {
    let (nx, ny) = (domain.nx(), domain.ny());
    let scale = u.max_abs().max(f64::MIN_POSITIVE);
    let mut rgb = vec![0u8; nx * ny * 3];
    for j in 0..ny {
        for i in 0..nx {
            let id = domain.id(i, j);
            // image rows run top-down
            let pix = ((ny - 1 - j) * nx + i) * 3;
            let color = match domain.class(id) {
                NodeClass::Exterior => EXTERIOR,
                NodeClass::Boundary | NodeClass::Interior => {
                    let t = (u.values()[id] / scale).clamp(-1.0, 1.0);
                    diverging(t)
                }
            };
            rgb[pix..pix + 3].copy_from_slice(&color);
        }
    }
    (nx, ny, rgb)
}

fn diverging(t: f64) -> [u8; 3] {
    // t in [-1, 1]: blue -> white -> red
    let lerp = |a: u8, b: u8, s: f64| (a as f64 + (b as f64 - a as f64) * s) as u8;
    if t >= 0.0 {
        let s = t;
        [lerp(255, 202, s), lerp(255, 0, s), lerp(255, 32, s)]
    } else {
        let s = -t;
        [lerp(255, 5, s), lerp(255, 113, s), lerp(255, 176, s)]
    }
}

/// RGB raster of a nodal decomposition: one color per signed component,
/// zero set in white, boundary gray, exterior near-black.
pub fn decomposition_rgb(decomp: &NodalDecomposition) -> (usize, usize, Vec<u8>) {
    let domain = decomp.domain();
    let (nx, ny) = (domain.nx(), domain.ny());
    let mut rgb = vec![0u8; nx * ny * 3];
    for j in 0..ny {
        for i in 0..nx {
            let id = domain.id(i, j);
            let pix = ((ny - 1 - j) * nx + i) * 3;
            let color = match domain.class(id) {
                NodeClass::Exterior => EXTERIOR,
                NodeClass::Boundary => BOUNDARY,
                NodeClass::Interior => {
                    let label = decomp.labels()[id];
                    if label > 0 {
                        WARM[(label as usize - 1) % WARM.len()]
                    } else if label < 0 {
                        COOL[((-label) as usize - 1) % COOL.len()]
                    } else {
                        ZERO
                    }
                }
            };
            rgb[pix..pix + 3].copy_from_slice(&color);
        }
    }
    (nx, ny, rgb)
}

/// Binary portable pixmap (P6).
pub fn write_ppm(path: &Path, width: usize, height: usize, rgb: &[u8]) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(f, "P6\n{} {}\n255\n", width, height)?;
    f.write_all(rgb)?;
    Ok(())
}

/// Label grid as a plain-text matrix: 0 for the zero set (and nodes outside
/// the decomposition), +i / -j for components. Rows top-down.
pub fn labels_text(decomp: &NodalDecomposition) -> String {
    let domain = decomp.domain();
    let (nx, ny) = (domain.nx(), domain.ny());
    let mut out = String::new();
    for j in (0..ny).rev() {
        for i in 0..nx {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&decomp.labels()[domain.id(i, j)].to_string());
        }
        out.push('\n');
    }
    out
}

/// Plain-text grid of field values: a header line `nx ny h x0 y0` followed
/// by ny rows (bottom-up) of nx values; exterior nodes print `nan`.
pub fn field_grid_text(domain: &DiscreteDomain, u: &ScalarField) -> String {
    let (nx, ny) = (domain.nx(), domain.ny());
    let origin = domain.coord(0);
    let mut out = format!("{} {} {} {} {}\n", nx, ny, domain.h(), origin.x, origin.y);
    for j in 0..ny {
        for i in 0..nx {
            if i > 0 {
                out.push(' ');
            }
            let id = domain.id(i, j);
            if domain.class(id) == NodeClass::Exterior {
                out.push_str("nan");
            } else {
                out.push_str(&format!("{}", u.values()[id]));
            }
        }
        out.push('\n');
    }
    out
}

/// CSV of node values: `x,y,u` for interior and boundary nodes in node-id
/// order.
pub fn field_csv(domain: &DiscreteDomain, u: &ScalarField) -> String {
    let mut out = String::from("x,y,u\n");
    for id in 0..domain.node_count() {
        if domain.class(id) != NodeClass::Exterior {
            let p = domain.coord(id);
            out.push_str(&format!("{},{},{}\n", p.x, p.y, u.values()[id]));
        }
    }
    out
}

/// Re-render a label grid parsed back from `labels_text` output (rows
/// top-down, whitespace-separated integers).
pub fn labels_rgb_from_text(text: &str) -> Result<(usize, usize, Vec<u8>), String> {
    let rows: Vec<Vec<i32>> = text
        .lines()
        .map(|line| {
            line.split_whitespace()
                .map(|t| t.parse::<i32>().map_err(|e| format!("bad label '{}': {}", t, e)))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() || rows[0].is_empty() {
        return Err("empty label grid".into());
    }
    let (w, h) = (rows[0].len(), rows.len());
    if rows.iter().any(|r| r.len() != w) {
        return Err("ragged label grid".into());
    }
    let mut rgb = vec![0u8; w * h * 3];
    for (j, row) in rows.iter().enumerate() {
        for (i, &label) in row.iter().enumerate() {
            let pix = (j * w + i) * 3;
            let color = if label > 0 {
                WARM[(label as usize - 1) % WARM.len()]
            } else if label < 0 {
                COOL[((-label) as usize - 1) % COOL.len()]
            } else {
                ZERO
            };
            rgb[pix..pix + 3].copy_from_slice(&color);
        }
    }
    Ok((w, h, rgb))
}

/// Re-render a field grid parsed back from `field_grid_text` output.
pub fn field_rgb_from_text(text: &str) -> Result<(usize, usize, Vec<u8>), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("missing header")?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 5 {
        return Err("header must be 'nx ny h x0 y0'".into());
    }
    let nx: usize = parts[0].parse().map_err(|_| "bad nx")?;
    let ny: usize = parts[1].parse().map_err(|_| "bad ny")?;
    let mut values: Vec<Option<f64>> = Vec::with_capacity(nx * ny);
    for line in lines {
        for tok in line.split_whitespace() {
            if tok == "nan" {
                values.push(None);
            } else {
                values.push(Some(tok.parse::<f64>().map_err(|e| format!("bad value '{}': {}", tok, e))?));
            }
        }
    }
    if values.len() != nx * ny {
        return Err(format!("expected {} values, got {}", nx * ny, values.len()));
    }
    let scale = values
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let mut rgb = vec![0u8; nx * ny * 3];
    for j in 0..ny {
        for i in 0..nx {
            // grid rows are bottom-up, image rows top-down
            let pix = ((ny - 1 - j) * nx + i) * 3;
            let color = match values[j * nx + i] {
                None => EXTERIOR,
                Some(v) => diverging((v / scale).clamp(-1.0, 1.0)),
            };
            rgb[pix..pix + 3].copy_from_slice(&color);
        }
    }
    Ok((nx, ny, rgb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_disk_domain;
    use std::sync::Arc;

    #[test]
    fn rasters_have_expected_dimensions() {
        let dom = Arc::new(build_disk_domain(1.0, 1.0 / 16.0).unwrap());
        let u = ScalarField::from_fn(&dom, |p| p.x);
        let (w, h, rgb) = field_rgb(&dom, &u);
        assert_eq!(rgb.len(), w * h * 3);
        let d = crate::nodal::extract_nodal_decomposition(&dom, &u, 0.0).unwrap();
        let (w2, h2, rgb2) = decomposition_rgb(&d);
        assert_eq!((w2, h2), (w, h));
        assert_eq!(rgb2.len(), rgb.len());
    }

    #[test]
    fn label_grid_is_parseable_and_complete() {
        let dom = Arc::new(build_disk_domain(1.0, 1.0 / 16.0).unwrap());
        let u = ScalarField::from_fn(&dom, |p| p.x);
        let d = crate::nodal::extract_nodal_decomposition(&dom, &u, 0.0).unwrap();
        let text = labels_text(&d);
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), dom.ny());
        let first: Vec<i32> = rows[0]
            .split(' ')
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(first.len(), dom.nx());
    }
}
