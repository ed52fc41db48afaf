use crate::error::{Error, Result};
use crate::model::Position;

/// Mean Earth radius in meters (IUGG).
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// Great-circle distance in meters between two positions (haversine).
pub fn geodesic_length(a: Position, b: Position) -> Result<f64> {
    for p in [a, b] {
        if !p.lon.is_finite() || !p.lat.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinate [{}, {}]",
                p.lon, p.lat
            )));
        }
    }
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let half_dlat = (lat2 - lat1) / 2.0;
    let half_dlon = (b.lon.to_radians() - a.lon.to_radians()) / 2.0;
    let h = half_dlat.sin().powi(2) + lat1.cos() * lat2.cos() * half_dlon.sin().powi(2);
    Ok(2.0 * EARTH_RADIUS_M * h.clamp(0.0, 1.0).sqrt().asin())
}

/// Vertex average of a ring, ignoring a repeated closing vertex.
pub fn centroid(ring: &[Position]) -> Option<Position> {
    let pts = open_ring(ring);
    if pts.is_empty() {
        return None;
    }
    let n = pts.len() as f64;
    let (lon, lat) = pts
        .iter()
        .fold((0.0, 0.0), |(x, y), p| (x + p.lon, y + p.lat));
    Some(Position::new(lon / n, lat / n))
}

/// Even-odd point-in-polygon test in planar lon/lat.
pub fn contains(ring: &[Position], p: Position) -> bool {
    let pts = open_ring(ring);
    let mut inside = false;
    let mut j = pts.len().wrapping_sub(1);
    for i in 0..pts.len() {
        let (a, b) = (pts[i], pts[j]);
        if (a.lat > p.lat) != (b.lat > p.lat)
            && p.lon < (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon
        {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn open_ring(ring: &[Position]) -> &[Position] {
    match ring {
        [first, .., last] if first == last => &ring[..ring.len() - 1],
        _ => ring,
    }
}
