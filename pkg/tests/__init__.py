# Test package for pseudometric space analysis
