use crate::corpus::Box3D;

/// Axis-aligned 3D intersection over union. Zero when the union has no volume.
pub fn iou3d(a: &Box3D, b: &Box3D) -> f64 {
    let (amin, amax) = (a.min_corner(), a.max_corner());
    let (bmin, bmax) = (b.min_corner(), b.max_corner());
    let mut inter = 1.0;
    for d in 0..3 {
        let overlap = amax[d].min(bmax[d]) - amin[d].max(bmin[d]);
        if overlap <= 0.0 {
            return 0.0;
        }
        inter *= overlap;
    }
    let union = a.volume() + b.volume() - inter;
    if union <= 0.0 {
        return 0.0;
    }
    (inter / union).clamp(0.0, 1.0)
}
