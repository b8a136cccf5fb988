"""Topological invariants of binary voxel volumes.

Connected components, genus of every boundary surface and Betti ranks of
each object, computed directly on the cubical grid without triangulation.
"""
from .boundary import BoundaryComplex, build_boundary_complex, euler_characteristic, find_boundary_voxels
from .homology import HomologyRanks, euler_characteristic_3m, homology_of_component
from .io import load_volume, save_volume
from .labeling import ComponentLabeling, extract_component, label_background, label_components
from .repair import PathologyInstance, PathologyKind, RepairLog, detect_pathologies, is_well_composed, repair_volume
from .report import TopologyReport, render_report, run_pipeline
from .shapes import ShapeSpec, generate_shape
from .surface import SurfaceClassification, analyze_surfaces, classify_points, gauss_bonnet_check, genus
from .volume import AdjacencyKind, VoxelVolume

__version__ = "0.1.0"

__all__ = [
    "AdjacencyKind", "BoundaryComplex", "ComponentLabeling", "HomologyRanks", "PathologyInstance",
    "PathologyKind", "RepairLog", "ShapeSpec", "SurfaceClassification", "TopologyReport", "VoxelVolume",
    "analyze_surfaces", "build_boundary_complex", "classify_points", "detect_pathologies",
    "euler_characteristic", "euler_characteristic_3m", "extract_component", "find_boundary_voxels",
    "gauss_bonnet_check", "generate_shape", "genus", "homology_of_component", "is_well_composed",
    "label_background", "label_components", "load_volume", "render_report", "repair_volume",
    "run_pipeline", "save_volume",
]
