"""Staged static analysis for MiniObj programs.

Stage 1 explores each translation unit on its own and emits candidate
reports; stage 2 validates garbage-read candidates over the linked
whole-program IR.
"""
__version__ = "0.1.0"
