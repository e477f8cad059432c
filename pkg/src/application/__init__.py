"""Application layer package."""
from  application.use_cases import *
