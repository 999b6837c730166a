"""Configuration module for the Hybrid Spectral Toolkit"""
from .settings import *
