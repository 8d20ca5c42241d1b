# Wordlab tests
