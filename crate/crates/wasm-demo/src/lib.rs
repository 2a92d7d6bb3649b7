//! Thin wasm-bindgen layer over `cl33` for the static page in `www/`.

use cl33::euclid::normalize_point;
use cl33::pipeline::{format_matrix, format_points, parse_pipeline, parse_points, Pipeline};
use cl33::projective::projective_matrix_probe;
use cl33::{EuclidVector, NormalizedPoint, Paravector};
use wasm_bindgen::prelude::*;

/// Corners of the cube `[-1, 1]³` shifted to `z ∈ [2, 4]`, in front of an eye at the origin.
pub const CUBE: [[f64; 3]; 8] = [
    [-1.0, -1.0, 2.0],
    [1.0, -1.0, 2.0],
    [1.0, 1.0, 2.0],
    [-1.0, 1.0, 2.0],
    [-1.0, -1.0, 4.0],
    [1.0, -1.0, 4.0],
    [1.0, 1.0, 4.0],
    [-1.0, 1.0, 4.0],
];

pub const CUBE_EDGES: [[usize; 2]; 12] = [
    [0, 1],
    [1, 2],
    [2, 3],
    [3, 0],
    [4, 5],
    [5, 6],
    [6, 7],
    [7, 4],
    [0, 4],
    [1, 5],
    [2, 6],
    [3, 7],
];

fn load(pipeline: &str) -> Result<Pipeline, String> {
    parse_pipeline(pipeline).map_err(|e| e.to_string())
}

pub fn apply_text(pipeline: &str, points: &str, normalize: bool) -> Result<String, String> {
    let t = load(pipeline)?.transform().map_err(|e| e.to_string())?;
    let input = parse_points(points).map_err(|e| format!("points {e}"))?;
    let mut out = Vec::with_capacity(input.len());
    for p in &input {
        let q = t.apply(p).map_err(|e| e.to_string())?;
        out.push(match (normalize, normalize_point(&q)) {
            (false, _) => q,
            (true, NormalizedPoint::Finite(n)) => n,
            (true, NormalizedPoint::AtInfinity(v)) => Paravector::new(0.0, v),
        });
    }
    Ok(format_points(&out))
}

pub fn matrix_text(pipeline: &str) -> Result<String, String> {
    let t = load(pipeline)?.transform().map_err(|e| e.to_string())?;
    projective_matrix_probe(&t)
        .map(|m| format_matrix(&m))
        .map_err(|e| e.to_string())
}

/// Images of the cube corners as `[w, x, y, z]` quadruples, weights kept.
pub fn cube_images(pipeline: &str) -> Result<Vec<f64>, String> {
    let t = load(pipeline)?.transform().map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(32);
    for [x, y, z] in CUBE {
        let q = t
            .apply(&Paravector::affine(EuclidVector::new(x, y, z)))
            .map_err(|e| e.to_string())?;
        out.extend(q.to_array());
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn apply_pipeline(pipeline: &str, points: &str, normalize: bool) -> Result<String, JsError> {
    apply_text(pipeline, points, normalize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pipeline_matrix(pipeline: &str) -> Result<String, JsError> {
    matrix_text(pipeline).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn transform_cube(pipeline: &str) -> Result<Vec<f64>, JsError> {
    cube_images(pipeline).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cube_edges() -> Vec<u32> {
    CUBE_EDGES.iter().flatten().map(|&i| i as u32).collect()
}
