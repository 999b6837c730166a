"""Report Documents Module"""
from .pdf_generator import VerificationReportGenerator
