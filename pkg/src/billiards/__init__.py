"""
Dinámica exacta de rayos en el disco/anillo y su linealización simpléctica.
"""
