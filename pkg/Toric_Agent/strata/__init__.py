"""
分层模块 - 无环定向、分层定位、Farkas 证书与下降检查
"""

from .orientations import (
    orientation_from_edges, acyclic_orientations, stratum_of, stratum_closure_orientations
)
from .farkas import farkas_vector, verify_certificate, descent_check

__all__ = [
    'orientation_from_edges', 'acyclic_orientations', 'stratum_of', 'stratum_closure_orientations',
    'farkas_vector', 'verify_certificate', 'descent_check'
]
