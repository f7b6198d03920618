import radialwave.main
radialwave.main.main()
