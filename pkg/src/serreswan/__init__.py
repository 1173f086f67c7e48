"""Numerical Serre-Swan correspondence for finite-dimensional C*-algebras.

A Hilbert module X over A = M_{n_1} + ... + M_{n_K} is realized as
holomorphic sections of a hermitian bundle over the pure states of A, with
the module action given by a connection and the Gel'fand star product.
"""

from .algebra import (
    AlgebraElement,
    AlgebraShape,
    adjoint,
    iso_signature,
    make_algebra,
    mul,
    operator_norm,
    pauli,
    random_element,
    random_hermitian,
    random_unitary,
    spectrum,
)
from .bundle import (
    FiberVector,
    Section,
    constant_section,
    fiber_inner,
    generic_section,
    group_act,
    h_function,
    hermitian,
    holomorphy_check,
    project,
    section_norm,
    trivialize,
    typical_fiber_map,
)
from .connection import (
    cocycle_check,
    coeff,
    covariant_derivative,
    flatness_check,
    star_action,
    transport_solver,
)
from .gelfand import (
    StateFunction,
    gelfand,
    generic,
    hamiltonian_field,
    ku_membership_check,
    reconstruct,
    star,
    star_norm,
    tomographic_frame,
)
from .hilbert import ModuleElement, ModuleShape, act, inner, make_module, module_norm, random_module_element
from .states import Chart, PureState, StateSampler, beta, beta_inv, evaluate, random_state

__all__ = [
    "AlgebraElement",
    "AlgebraShape",
    "adjoint",
    "iso_signature",
    "make_algebra",
    "mul",
    "operator_norm",
    "pauli",
    "random_element",
    "random_hermitian",
    "random_unitary",
    "spectrum",
    "FiberVector",
    "Section",
    "constant_section",
    "fiber_inner",
    "generic_section",
    "group_act",
    "h_function",
    "hermitian",
    "holomorphy_check",
    "project",
    "section_norm",
    "trivialize",
    "typical_fiber_map",
    "cocycle_check",
    "coeff",
    "covariant_derivative",
    "flatness_check",
    "star_action",
    "transport_solver",
    "StateFunction",
    "gelfand",
    "generic",
    "hamiltonian_field",
    "ku_membership_check",
    "reconstruct",
    "star",
    "star_norm",
    "tomographic_frame",
    "ModuleElement",
    "ModuleShape",
    "act",
    "inner",
    "make_module",
    "module_norm",
    "random_module_element",
    "Chart",
    "PureState",
    "StateSampler",
    "beta",
    "beta_inv",
    "evaluate",
    "random_state",
]

__version__ = "0.1.0"
