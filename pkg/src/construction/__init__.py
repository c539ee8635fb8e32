"""Inductive frequency selection and transfer certificates."""
