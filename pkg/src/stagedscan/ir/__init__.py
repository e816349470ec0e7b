"""Typed IR: lowering of checked units, linking, and canonical serialization."""
from .link import field_store_scan, link, read_module, write_module
from .lower import lower_unit
from .model import Block, Instr, IRClass, IRError, IRFunction, IRModule, IRProgram, dumps_canonical

__all__ = [
    "Block", "Instr", "IRClass", "IRError", "IRFunction", "IRModule", "IRProgram",
    "dumps_canonical", "field_store_scan", "link", "lower_unit", "read_module", "write_module",
]
