//! Tree and crown-shape primitives, rasterization and overlap measures.

mod iou;
mod raster;
mod shapes;
mod wkt;

pub use iou::{
    box_nms, default_iou_spec, disk_iou, disk_iou_upper_bound, lens_area, rasterized_iou,
    shape_iou, disk_polygon_intersection_area, UpperBound, UpperBoundMode, UPPER_BOUND_RADIUS_TOL,
};
pub use raster::{rasterize, Mask, RasterSpec};
pub use shapes::{ca_to_cd, cd_to_ca, AxisBox, Disk, Point, Polygon, Shape, TreeRecord};
pub use wkt::{format_wkt_polygon, parse_wkt_polygon};
