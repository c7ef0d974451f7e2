# Utilities for dipolar_eit
