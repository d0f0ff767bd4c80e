# Hatcher engine modules: surfaces, curves, complexes, paths, induced maps
