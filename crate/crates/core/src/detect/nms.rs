use crate::geometry::iou;
use crate::tracker::Detection;

/// Greedy non-maximum suppression per class.
///
/// Detections are visited by descending confidence (ties keep input order); a
/// detection is dropped when its IoU with an already kept detection of the
/// same class exceeds `iou_threshold`. Output is in visiting order.
pub fn nms(dets: &[Detection], iou_threshold: f64) -> Vec<Detection> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].confidence.total_cmp(&dets[a].confidence));

    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let d = &dets[i];
        let suppressed =
            kept.iter().any(|&k| dets[k].class_id == d.class_id && iou(&dets[k].bbox, &d.bbox) > iou_threshold);
        if !suppressed {
            kept.push(i);
        }
    }
    kept.into_iter().map(|i| dets[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BBox;

    #[test]
    fn keeps_higher_of_duplicates() {
        let b = BBox::new(10.0, 10.0, 8.0, 8.0);
        let out = nms(&[Detection::new(b, 0.8), Detection::new(b, 0.9)], 0.5);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].confidence, 0.9);
    }

    #[test]
    fn disjoint_all_kept_in_confidence_order() {
        let dets: Vec<Detection> = [0.3, 0.9, 0.6]
            .iter()
            .enumerate()
            .map(|(i, &c)| Detection::new(BBox::new(i as f64 * 100.0, 0.0, 10.0, 10.0), c))
            .collect();
        let confs: Vec<f64> = nms(&dets, 0.5).iter().map(|d| d.confidence).collect();
        assert_eq!(confs, vec![0.9, 0.6, 0.3]);
    }

    #[test]
    fn other_classes_are_not_suppressed() {
        let b = BBox::new(10.0, 10.0, 8.0, 8.0);
        let out = nms(&[Detection::new(b, 0.9), Detection::new(b, 0.8).with_class(1)], 0.5);
        assert_eq!(out.len(), 2);
    }
}
