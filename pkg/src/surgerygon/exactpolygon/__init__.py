"""Exact polygons and cubes of F2 chain complexes."""

from .cube import (
    CubeReport,
    ExactNCube,
    GnPath,
    all_paths,
    cube_to_polygon,
    enumerate_paths,
    subsets,
    verify_cube,
)
from .generators import (
    cone_triangle,
    contractible_ngon,
    cube_one,
    cube_two,
    four_gon,
    random_cone_triangle,
    random_four_gon,
    zero_cube,
    zero_ngon,
)
from .ngon import (
    ExactNGon,
    NGonReport,
    SideComplex,
    euler_check,
    map_degree_violations,
    polygon_spectral_sequence,
    side_complex,
    side_spectral_sequence,
    total_complex,
    verify_ngon,
)
from .signs import SignResult, SurgerySignData, epsilon_signs, hand_rule
from .triangle import TriangleReport, triangle_detect, triangle_from_ngon

__all__ = [
    "CubeReport",
    "ExactNCube",
    "ExactNGon",
    "GnPath",
    "NGonReport",
    "SideComplex",
    "SignResult",
    "SurgerySignData",
    "TriangleReport",
    "all_paths",
    "cone_triangle",
    "contractible_ngon",
    "cube_one",
    "cube_to_polygon",
    "cube_two",
    "enumerate_paths",
    "epsilon_signs",
    "euler_check",
    "four_gon",
    "hand_rule",
    "map_degree_violations",
    "polygon_spectral_sequence",
    "random_cone_triangle",
    "random_four_gon",
    "side_complex",
    "side_spectral_sequence",
    "subsets",
    "total_complex",
    "triangle_detect",
    "triangle_from_ngon",
    "verify_cube",
    "verify_ngon",
    "zero_cube",
    "zero_ngon",
]
